//! Discrete operators: fractional stiffness, potential mass matrix, the
//! rank-one coupling of the reconstruction method, and load vectors.

use crate::error::{Error, Result};
use crate::fraccalc::{
    rgamma, weighted_endpoint_integral, Field, FracOrder, PowerSum, QuadratureRule, GJ_POINTS, GL_POINTS,
};
use crate::linalg::{Matrix, SymTridiagonal, ToeplitzStencil};
use crate::mesh::Mesh;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// u(0) = u(1) = 0.
    Dirichlet,
    /// D₀^{α−1}u(0) = 0 and u(1) = 0; needs α > 3/2.
    MixedLeftNeumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Standard,
    Reconstruction,
}

/// −D₀^α u + q u = f on (0, 1) with the given boundary conditions.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    alpha: FracOrder,
    q: Field,
    f: Field,
    bc: BoundaryCondition,
}

impl ProblemSpec {
    pub fn new(alpha: FracOrder, q: Field, f: Field, bc: BoundaryCondition) -> Result<Self> {
        if bc == BoundaryCondition::MixedLeftNeumann && !alpha.admits_mixed() {
            return Err(Error::Argument(format!(
                "mixed boundary conditions need alpha > 3/2, got {}",
                alpha.value()
            )));
        }
        q.check_bounded(1000)?;
        Ok(Self { alpha, q, f, bc })
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn q(&self) -> &Field {
        &self.q
    }

    pub fn f(&self) -> &Field {
        &self.f
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    /// Exponent p of the singular profile x^p − x².
    pub fn singular_exponent(&self) -> f64 {
        match self.bc {
            BoundaryCondition::Dirichlet => self.alpha.value() - 1.0,
            BoundaryCondition::MixedLeftNeumann => self.alpha.value() - 2.0,
        }
    }
}

/// Data of the splitting u = uʳ + μ·u_s.
#[derive(Debug, Clone)]
pub struct SingularPair {
    pub u_s: PowerSum,
    pub c0: f64,
    pub c1: PowerSum,
    /// Q = c0·c1 − c0·q·u_s
    pub q_fn: Field,
    /// f̃ = f + (₀I^α f)(1)·Q
    pub f_tilde: Field,
    /// (₀I^α f)(1)
    pub f_moment: f64,
}

const DEGENERATE_TOL: f64 = 1e-8;

pub fn build_singular_pair(spec: &ProblemSpec) -> Result<SingularPair> {
    let alpha = spec.alpha();
    let a = alpha.value();
    let u_s = PowerSum::monomial(1.0, spec.singular_exponent())?.left(-1.0, 0.0, 2.0)?;
    let q_us = spec.q().times(&Field::from_power_sum(&u_s)?);
    let rule = QuadratureRule::endpoint_default();
    let denominator = 1.0 + weighted_endpoint_integral(&q_us, alpha, &rule)?;
    if !(denominator.abs() >= DEGENERATE_TOL) {
        return Err(Error::DegenerateSplitting { denominator });
    }
    let c0 = 1.0 / denominator;
    let c1 = PowerSum::monomial(-2.0 * rgamma(3.0 - a), 2.0 - a)?;
    let q_fn = Field::from_power_sum(&c1)?.scaled(c0).plus(&q_us.scaled(-c0));
    let f_moment = weighted_endpoint_integral(spec.f(), alpha, &rule)?;
    let f_tilde = spec.f().plus(&q_fn.scaled(f_moment));
    Ok(SingularPair { u_s, c0, c1, q_fn, f_tilde, f_moment })
}

/// Everything needed to solve on one mesh.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub mesh: Arc<Mesh>,
    pub alpha: FracOrder,
    pub method: Method,
    /// A[i][j] = −(D₀^{α/2}φ_j, D₁^{α/2}φ_i)
    pub lead: Matrix,
    /// M[i][j] = (q φ_j, φ_i)
    pub mass: SymTridiagonal,
    /// rᵢ = (Q, φᵢ)
    pub r_vec: Option<Vec<f64>>,
    /// s_j = (₀I^α(q φ_j))(1)
    pub s_vec: Option<Vec<f64>>,
    pub load: Vec<f64>,
    /// Diagonals of `lead` when the mesh is uniform.
    pub stencil: Option<ToeplitzStencil>,
    pub singular: Option<SingularPair>,
}

impl AssembledSystem {
    pub fn n(&self) -> usize {
        self.load.len()
    }

    pub fn is_toeplitz(&self) -> bool {
        self.stencil.is_some()
    }

    pub fn rank_one(&self) -> Option<(&[f64], &[f64])> {
        match (&self.r_vec, &self.s_vec) {
            (Some(r), Some(s)) => Some((r, s)),
            _ => None,
        }
    }

    /// A_lead + M_q (+ r sᵀ for the reconstruction method), densely.
    pub fn system_matrix(&self) -> Matrix {
        let mut a = self.lead.clone();
        for i in 0..self.n() {
            for j in i.saturating_sub(1)..(i + 2).min(self.n()) {
                a.add_to(i, j, self.mass.get(i, j));
            }
        }
        if let Some((r, s)) = self.rank_one() {
            for (i, ri) in r.iter().enumerate() {
                for (a_ij, sj) in a.row_mut(i).iter_mut().zip(s) {
                    *a_ij += ri * sj;
                }
            }
        }
        a
    }

    /// (A_lead + M_q + r sᵀ) x without forming the matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.lead.matvec(x);
        self.mass.matvec_add(x, &mut y);
        if let Some((r, s)) = self.rank_one() {
            let t: f64 = s.iter().zip(x).map(|(a, b)| a * b).sum();
            for (yi, ri) in y.iter_mut().zip(r) {
                *yi += ri * t;
            }
        }
        y
    }
}

/// Relative distance (in support widths) beyond which entries are
/// integrated from the smooth kernel instead of the cancelling closed form.
const SEPARATION: f64 = 1.0;

fn gl_points_for(dist: f64, width: f64) -> usize {
    let r = 1.0 + 2.0 * dist / width;
    let rho = r + (r * r - 1.0).sqrt();
    // aim for rho^{−2n} below 1e−17
    let n = (39.2 / (2.0 * rho.ln())).ceil();
    if n.is_finite() { (n as usize).clamp(2, 32) } else { 32 }
}

/// One stiffness entry from the anchors/jumps of the trial hat (tr) and
/// the test hat (te); `p` = 3 − α.
pub(crate) fn lead_entry(tr: &([f64; 3], [f64; 3]), te: &([f64; 3], [f64; 3]), p: f64) -> f64 {
    let scale = -rgamma(p + 1.0);
    let (ta, ts) = tr;
    let (ea, es) = te;
    let gap = ea[0] - ta[2];
    let width = (ta[2] - ta[0]).max(ea[2] - ea[0]);
    if gap > 0.0 && gap >= SEPARATION * width {
        // Σσₖτₗ(bₗ−aₖ)^p = ∫∫ φ_j(a) φ_i(b) ∂ₐ²∂_b² (b−a)^p da db
        let k4 = p * (p - 1.0) * (p - 2.0) * (p - 3.0);
        let mut acc = 0.0;
        for e in 0..2 {
            let (a0, a1) = (ta[e], ta[e + 1]);
            for f in 0..2 {
                let (b0, b1) = (ea[f], ea[f + 1]);
                let dist = b0 - a1;
                let ra = crate::fraccalc::gl_rule(gl_points_for(dist, a1 - a0));
                let rb = crate::fraccalc::gl_rule(gl_points_for(dist, b1 - b0));
                let (ha, hb) = (0.5 * (a1 - a0), 0.5 * (b1 - b0));
                let mut s = 0.0;
                for (u, wu) in ra.nodes.iter().zip(&ra.weights) {
                    let a = a0 + ha * (1.0 + u);
                    let pa = if e == 0 { 0.5 * (1.0 + u) } else { 0.5 * (1.0 - u) };
                    let mut inner = 0.0;
                    for (v, wv) in rb.nodes.iter().zip(&rb.weights) {
                        let b = b0 + hb * (1.0 + v);
                        let pb = if f == 0 { 0.5 * (1.0 + v) } else { 0.5 * (1.0 - v) };
                        inner += wv * pb * (b - a).powf(p - 4.0);
                    }
                    s += wu * pa * inner;
                }
                acc += ha * hb * s;
            }
        }
        scale * k4 * acc
    } else if gap > 0.0 && gap >= SEPARATION * (ta[2] - ta[0]).min(ea[2] - ea[0]) {
        // Supports of very different size: move the second difference of the
        // narrow hat onto the kernel and integrate it against that hat.
        let trial_narrow = ta[2] - ta[0] <= ea[2] - ea[0];
        let (na, wide_a, wide_s) = if trial_narrow { (ta, ea, es) } else { (ea, ta, ts) };
        let k2 = p * (p - 1.0);
        let mut acc = 0.0;
        for e in 0..2 {
            let (x0, x1) = (na[e], na[e + 1]);
            let dist = if trial_narrow { wide_a[0] - x1 } else { x0 - wide_a[2] };
            let r = crate::fraccalc::gl_rule(gl_points_for(dist, x1 - x0));
            let hx = 0.5 * (x1 - x0);
            let mut s = 0.0;
            for (u, wu) in r.nodes.iter().zip(&r.weights) {
                let x = x0 + hx * (1.0 + u);
                let phi = if e == 0 { 0.5 * (1.0 + u) } else { 0.5 * (1.0 - u) };
                let mut g = 0.0;
                for (y, sy) in wide_a.iter().zip(wide_s) {
                    let d = if trial_narrow { y - x } else { x - y };
                    g += sy * d.powf(p - 2.0);
                }
                s += wu * phi * g;
            }
            acc += hx * s;
        }
        scale * k2 * acc
    } else {
        let mut acc = 0.0;
        for (a, sa) in ta.iter().zip(ts) {
            for (b, sb) in ea.iter().zip(es) {
                let d = b - a;
                if d > 0.0 {
                    acc += sa * sb * d.powf(p);
                }
            }
        }
        scale * acc
    }
}

/// Diagonals t(i − j) of the stiffness matrix on a uniform mesh.
pub fn lead_stencil(mesh: &Mesh, alpha: FracOrder) -> Result<ToeplitzStencil> {
    if !mesh.is_uniform() {
        return Err(Error::Argument("a Toeplitz stencil needs a uniform mesh".into()));
    }
    let m = mesh.m();
    let n = mesh.dofs();
    let p = 3.0 - alpha.value();
    let mf = m as f64;
    let hat = |k: isize| {
        let x = |j: isize| j as f64 / mf;
        let (a, b, c) = (x(k - 1), x(k), x(k + 1));
        let (l, r) = (1.0 / (b - a), 1.0 / (c - b));
        ([a, b, c], [l, -l - r, r])
    };
    let trial = hat(1);
    Ok(ToeplitzStencil::from_fn(n, |d| if d < -1 { 0.0 } else { lead_entry(&trial, &hat(1 + d), p) }))
}

/// Entry-by-entry assembly on an arbitrary mesh.
pub fn assemble_lead_general(mesh: &Mesh, alpha: FracOrder) -> Matrix {
    let n = mesh.dofs();
    let p = 3.0 - alpha.value();
    let hats: Vec<_> = (1..=n).map(|j| mesh.hat(j)).collect();
    let mut a = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..(i + 2).min(n) {
            a.set(i, j, lead_entry(&hats[j], &hats[i], p));
        }
    }
    a
}

/// The leading stiffness matrix; uniform meshes are filled from the stencil.
pub fn assemble_lead(mesh: &Mesh, alpha: FracOrder) -> Matrix {
    match lead_stencil(mesh, alpha) {
        Ok(st) => st.to_dense(),
        Err(_) => assemble_lead_general(mesh, alpha),
    }
}

/// (q φ_j, φ_i), element by element.
pub fn assemble_mass_q(mesh: &Mesh, q: &Field) -> SymTridiagonal {
    let n = mesh.dofs();
    let mut mass = SymTridiagonal::zeros(n);
    if q.is_zero() {
        return mass;
    }
    for k in 0..mesh.m() {
        let (a, b) = mesh.element(k);
        let w = b - a;
        let left = move |x: f64| (b - x) / w;
        let right = move |x: f64| (x - a) / w;
        if k >= 1 {
            mass.diag[k - 1] += q.integrate(a, b, 0.0, &|x| left(x) * left(x), GL_POINTS, GJ_POINTS);
        }
        if k < n {
            mass.diag[k] += q.integrate(a, b, 0.0, &|x| right(x) * right(x), GL_POINTS, GJ_POINTS);
        }
        if k >= 1 && k < n {
            mass.off[k - 1] += q.integrate(a, b, 0.0, &|x| left(x) * right(x), GL_POINTS, GJ_POINTS);
        }
    }
    mass
}

/// ∫ g(x)(1−x)^re φᵢ(x) dx for every interior hat.
pub fn hat_moments(mesh: &Mesh, g: &Field, re: f64) -> Vec<f64> {
    let n = mesh.dofs();
    let mut out = vec![0.0; n];
    if g.is_zero() {
        return out;
    }
    for k in 0..mesh.m() {
        let (a, b) = mesh.element(k);
        let w = b - a;
        if k >= 1 {
            out[k - 1] += g.integrate(a, b, re, &|x| (b - x) / w, GL_POINTS, GJ_POINTS);
        }
        if k < n {
            out[k] += g.integrate(a, b, re, &|x| (x - a) / w, GL_POINTS, GJ_POINTS);
        }
    }
    out
}

/// (f, φᵢ).
pub fn load_vector(mesh: &Mesh, f: &Field) -> Vec<f64> {
    hat_moments(mesh, f, 0.0)
}

/// s_j = (₀I^α(q φ_j))(1).
pub fn endpoint_moments(mesh: &Mesh, q: &Field, alpha: FracOrder) -> Vec<f64> {
    let a = alpha.value();
    let scale = rgamma(a);
    let mut s = hat_moments(mesh, q, a - 1.0);
    for v in &mut s {
        *v *= scale;
    }
    s
}

pub fn assemble_system(spec: &ProblemSpec, mesh: &Mesh, method: Method) -> Result<AssembledSystem> {
    let alpha = spec.alpha();
    if method == Method::Standard && spec.bc() != BoundaryCondition::Dirichlet {
        return Err(Error::Argument("the standard Galerkin method is set up for Dirichlet data only".into()));
    }
    let stencil = lead_stencil(mesh, alpha).ok();
    let lead = match &stencil {
        Some(st) => st.to_dense(),
        None => assemble_lead_general(mesh, alpha),
    };
    let mass = assemble_mass_q(mesh, spec.q());
    let mesh = Arc::new(mesh.clone());
    match method {
        Method::Standard => {
            let load = load_vector(&mesh, spec.f());
            Ok(AssembledSystem {
                mesh,
                alpha,
                method,
                lead,
                mass,
                r_vec: None,
                s_vec: None,
                load,
                stencil,
                singular: None,
            })
        }
        Method::Reconstruction => {
            let pair = build_singular_pair(spec)?;
            let r = hat_moments(&mesh, &pair.q_fn, 0.0);
            let load = load_vector(&mesh, &pair.f_tilde);
            let s = endpoint_moments(&mesh, spec.q(), alpha);
            Ok(AssembledSystem {
                mesh,
                alpha,
                method,
                lead,
                mass,
                r_vec: Some(r),
                s_vec: Some(s),
                load,
                stencil,
                singular: Some(pair),
            })
        }
    }
}
