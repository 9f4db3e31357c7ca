//! Meshes on [0, 1], hat functions and continuous piecewise-linear functions.

use crate::error::{Error, Result};
use crate::fraccalc::{rgamma, PowerSum};
use crate::fraccalc::Side;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// x_j = (j/m)^δ, δ ≥ 1.
    Graded { delta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    grading: Grading,
}

pub fn build_mesh(m: usize, grading: Grading) -> Result<Mesh> {
    if m < 2 {
        return Err(Error::Argument(format!("mesh needs at least 2 elements, got {m}")));
    }
    let mf = m as f64;
    let nodes = match grading {
        Grading::Uniform => (0..=m).map(|j| j as f64 / mf).collect(),
        Grading::Graded { delta } => {
            if !(delta >= 1.0) || !delta.is_finite() {
                return Err(Error::Argument(format!("grading exponent must be >= 1, got {delta}")));
            }
            (0..=m).map(|j| (j as f64 / mf).powf(delta)).collect()
        }
    };
    Ok(Mesh { nodes, grading })
}

impl Mesh {
    pub fn uniform(m: usize) -> Result<Self> {
        build_mesh(m, Grading::Uniform)
    }

    pub fn graded(m: usize, delta: f64) -> Result<Self> {
        build_mesh(m, Grading::Graded { delta })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of elements.
    pub fn m(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Number of interior nodes, i.e. unknowns.
    pub fn dofs(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn is_uniform(&self) -> bool {
        match self.grading {
            Grading::Uniform => true,
            Grading::Graded { delta } => delta == 1.0,
        }
    }

    /// Element k spans [x_k, x_{k+1}].
    pub fn element(&self, k: usize) -> (f64, f64) {
        (self.nodes[k], self.nodes[k + 1])
    }

    /// Index of the element containing x; a node belongs to the element on
    /// its left, except x = 0.
    pub fn element_of(&self, x: f64) -> usize {
        let idx = self.nodes.partition_point(|&n| n < x);
        idx.saturating_sub(1).min(self.m() - 1)
    }

    /// Anchors (x_{j−1}, x_j, x_{j+1}) and jumps of φ_j′ there.
    pub(crate) fn hat(&self, j: usize) -> ([f64; 3], [f64; 3]) {
        let (a, b, c) = (self.nodes[j - 1], self.nodes[j], self.nodes[j + 1]);
        let (l, r) = (1.0 / (b - a), 1.0 / (c - b));
        ([a, b, c], [l, -l - r, r])
    }
}

/// Continuous piecewise-linear function vanishing at both endpoints,
/// stored by its values at interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PwLinear {
    mesh: Arc<Mesh>,
    coeffs: Vec<f64>,
}

impl PwLinear {
    pub fn new(mesh: Arc<Mesh>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != mesh.dofs() {
            return Err(Error::Argument(format!(
                "expected {} interior values, got {}",
                mesh.dofs(),
                coeffs.len()
            )));
        }
        Ok(Self { mesh, coeffs })
    }

    pub fn zero(mesh: Arc<Mesh>) -> Self {
        let n = mesh.dofs();
        Self { mesh, coeffs: vec![0.0; n] }
    }

    /// The hat function φ_j, 0 < j < m.
    pub fn hat(mesh: Arc<Mesh>, j: usize) -> Result<Self> {
        if j == 0 || j >= mesh.m() {
            return Err(Error::Argument(format!("hat index {j} is not interior")));
        }
        let mut c = vec![0.0; mesh.dofs()];
        c[j - 1] = 1.0;
        Ok(Self { mesh, coeffs: c })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Value at node j, including the zero boundary values.
    pub fn nodal(&self, j: usize) -> f64 {
        if j == 0 || j == self.mesh.m() {
            0.0
        } else {
            self.coeffs[j - 1]
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} lies outside [0, 1]")));
        }
        Ok(self.value(x))
    }

    /// Unchecked evaluation; x is clamped to [0, 1].
    pub fn value(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let k = self.mesh.element_of(x);
        self.value_on(k, x)
    }

    /// Evaluation on a known element k.
    pub fn value_on(&self, k: usize, x: f64) -> f64 {
        let (a, b) = self.mesh.element(k);
        let t = (x - a) / (b - a);
        (1.0 - t) * self.nodal(k) + t * self.nodal(k + 1)
    }
}

pub fn eval_pwlinear(u: &PwLinear, x: f64) -> Result<f64> {
    u.eval(x)
}

/// D₀^s φ_j (left) or D₁^s φ_j (right) as a sum of shifted powers with
/// exponent 1 − s.
pub fn basis_frac_derivative(mesh: &Mesh, j: usize, s: f64, side: Side) -> Result<PowerSum> {
    if j == 0 || j >= mesh.m() {
        return Err(Error::Argument(format!("hat index {j} is not interior")));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Argument(format!("derivative order must lie in (0, 1), got {s}")));
    }
    let (anchors, jumps) = mesh.hat(j);
    let scale = rgamma(2.0 - s);
    let mut ps = PowerSum::new();
    for (a, sig) in anchors.iter().zip(jumps) {
        ps = match side {
            Side::Left => ps.left(scale * sig, *a, 1.0 - s)?,
            Side::Right => ps.right(scale * sig, *a, 1.0 - s)?,
        };
    }
    Ok(ps)
}
