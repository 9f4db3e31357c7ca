//! Linear solves for the standard and reconstruction discretisations.

use crate::assembly::{assemble_system, AssembledSystem, Method, ProblemSpec};
use crate::error::{Error, Result};
use crate::fraccalc::PowerSum;
use crate::linalg::{
    dot, gmres, norm_inf, GmresConfig, HessenbergLu, LinearOperator, LuFactors, Matrix, ToeplitzOperator,
};
use crate::mesh::{Mesh, PwLinear};

pub use crate::linalg::toeplitz_matvec;

/// Largest number of elements for which the full dense system is factored.
pub const DENSE_MAX_M: usize = 1024;

const RESIDUAL_RTOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct StandardSolution {
    pub u_h: PwLinear,
}

impl StandardSolution {
    pub fn eval(&self, x: f64) -> f64 {
        self.u_h.value(x)
    }
}

/// uₕ = uʳₕ + μₕ·u_s.
#[derive(Debug, Clone)]
pub struct ReconSolution {
    pub u_r_h: PwLinear,
    pub mu_h: f64,
    pub c0: f64,
    pub u_s: PowerSum,
    pub spec: ProblemSpec,
}

impl ReconSolution {
    pub fn eval(&self, x: f64) -> f64 {
        self.u_r_h.value(x) + self.mu_h * self.u_s.eval(x)
    }

    pub fn regular(&self, x: f64) -> f64 {
        self.u_r_h.value(x)
    }
}

enum Factored {
    Dense(LuFactors),
    /// Hessenberg LU of A_lead + M_q with the rank-one term applied by
    /// Sherman–Morrison.
    Structured { lu: HessenbergLu, rank_one: Option<(Vec<f64>, Vec<f64>, f64)> },
}

impl Factored {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        match self {
            Factored::Dense(lu) => lu.solve(b),
            Factored::Structured { lu, rank_one } => {
                let mut x = lu.solve(b);
                if let Some((z, s, denom)) = rank_one {
                    let t = dot(s, &x) / denom;
                    for (xi, zi) in x.iter_mut().zip(z) {
                        *xi -= t * zi;
                    }
                }
                x
            }
        }
    }
}

fn factor(sys: &AssembledSystem, with_rank_one: bool) -> Result<Factored> {
    let n = sys.n();
    let rank_one = if with_rank_one { sys.rank_one() } else { None };
    if sys.mesh.m() <= DENSE_MAX_M {
        let mut a = sys.lead.clone();
        for i in 0..n {
            for j in i.saturating_sub(1)..(i + 2).min(n) {
                a.add_to(i, j, sys.mass.get(i, j));
            }
        }
        if let Some((r, s)) = rank_one {
            for (i, ri) in r.iter().enumerate() {
                for (aij, sj) in a.row_mut(i).iter_mut().zip(s) {
                    *aij += ri * sj;
                }
            }
        }
        return Ok(Factored::Dense(LuFactors::factor(a)?));
    }
    let mut t = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..(i + 2).min(n) {
            t.set(j, i, sys.lead.get(i, j) + sys.mass.get(i, j));
        }
    }
    let lu = HessenbergLu::factor_transposed(t)?;
    let rank_one = match rank_one {
        Some((r, s)) => {
            let z = lu.solve(r);
            let denom = 1.0 + dot(s, &z);
            let size = 1.0 + norm_inf(s) * norm_inf(&z) * n as f64;
            if !(denom.abs() > 1e-14 * size) {
                return Err(Error::SingularSystem { column: n, pivot: denom.abs() });
            }
            Some((z, s.to_vec(), denom))
        }
        None => None,
    };
    Ok(Factored::Structured { lu, rank_one })
}

fn apply_system(sys: &AssembledSystem, x: &[f64], with_rank_one: bool) -> Vec<f64> {
    let mut y = sys.lead.matvec(x);
    sys.mass.matvec_add(x, &mut y);
    if with_rank_one {
        if let Some((r, s)) = sys.rank_one() {
            let t = dot(s, x);
            for (yi, ri) in y.iter_mut().zip(r) {
                *yi += ri * t;
            }
        }
    }
    y
}

/// Direct solve with one step of iterative refinement when the residual
/// exceeds 1e−10 relative to the load.
fn direct_solve(sys: &AssembledSystem, with_rank_one: bool) -> Result<Vec<f64>> {
    let f = factor(sys, with_rank_one)?;
    let mut x = f.solve(&sys.load);
    let target = RESIDUAL_RTOL * norm_inf(&sys.load);
    let res: Vec<f64> =
        sys.load.iter().zip(apply_system(sys, &x, with_rank_one)).map(|(b, ax)| b - ax).collect();
    if norm_inf(&res) > target {
        let dx = f.solve(&res);
        for (xi, di) in x.iter_mut().zip(dx) {
            *xi += di;
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem { column: 0, pivot: f64::NAN });
    }
    Ok(x)
}

/// Solves (A_lead + M_q) c = load; any rank-one data in `sys` is ignored.
pub fn solve_standard(sys: &AssembledSystem) -> Result<StandardSolution> {
    if sys.n() == 0 {
        return Err(Error::Argument("system has no unknowns".into()));
    }
    let c = direct_solve(sys, false)?;
    Ok(StandardSolution { u_h: PwLinear::new(sys.mesh.clone(), c)? })
}

/// Regular part from (A_lead + M_q + r sᵀ) c = (f̃, φ), then
/// μₕ = c0·(₀I^α(f − q uʳₕ))(1) = c0·(F − sᵀc).
pub fn solve_reconstruction_system(sys: &AssembledSystem, spec: &ProblemSpec) -> Result<ReconSolution> {
    let pair = sys
        .singular
        .as_ref()
        .ok_or_else(|| Error::Argument("system was not assembled for reconstruction".into()))?;
    let s = sys.s_vec.as_deref().unwrap_or(&[]);
    let c = direct_solve(sys, true)?;
    let mu_h = pair.c0 * (pair.f_moment - dot(s, &c));
    Ok(ReconSolution {
        u_r_h: PwLinear::new(sys.mesh.clone(), c)?,
        mu_h,
        c0: pair.c0,
        u_s: pair.u_s.clone(),
        spec: spec.clone(),
    })
}

pub fn solve_reconstruction(spec: &ProblemSpec, mesh: &Mesh) -> Result<ReconSolution> {
    let sys = assemble_system(spec, mesh, Method::Reconstruction)?;
    solve_reconstruction_system(&sys, spec)
}

struct SystemOperator<'a> {
    sys: &'a AssembledSystem,
    toeplitz: Option<ToeplitzOperator>,
}

impl LinearOperator for SystemOperator<'_> {
    fn dim(&self) -> usize {
        self.sys.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let lead = match &self.toeplitz {
            Some(op) => op.apply(x),
            None => self.sys.lead.matvec(x),
        };
        y.copy_from_slice(&lead);
        self.sys.mass.matvec_add(x, y);
        if let Some((r, s)) = self.sys.rank_one() {
            let t = dot(s, x);
            for (yi, ri) in y.iter_mut().zip(r) {
                *yi += ri * t;
            }
        }
    }
}

/// Unpreconditioned GMRES(50) on the full system, including the rank-one
/// term when present. Uses the FFT product on uniform meshes.
pub fn solve_iterative(sys: &AssembledSystem, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let op = SystemOperator { sys, toeplitz: sys.stencil.as_ref().map(ToeplitzOperator::new) };
    let cfg = GmresConfig { restart: 50, max_iters: 2000, tol };
    Ok(gmres(&op, &sys.load, &cfg)?.x)
}
