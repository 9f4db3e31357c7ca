use super::exact::ExactSolution;
use crate::assembly::{assemble_lead_general, lead_stencil};
use crate::error::{Error, Result};
use crate::fraccalc::{gauss_legendre, FracOrder};
use crate::linalg::{dot, Matrix, ToeplitzOperator};
use crate::mesh::Mesh;
use crate::solver::{ReconSolution, StandardSolution};

#[derive(Debug, Clone, Copy)]
pub enum Approximation<'a> {
    Standard(&'a StandardSolution),
    Recon(&'a ReconSolution),
}

impl Approximation<'_> {
    fn mesh(&self) -> &Mesh {
        match self {
            Approximation::Standard(s) => s.u_h.mesh(),
            Approximation::Recon(s) => s.u_r_h.mesh(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichField {
    FullU,
    RegularPart,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub energy: f64,
    pub linf: f64,
}

enum LeadOp {
    Toeplitz(ToeplitzOperator),
    Dense(Matrix),
}

/// Fine mesh and its stiffness operator, shared by all levels of a study.
pub struct ErrorContext {
    fine: Mesh,
    lead: LeadOp,
}

impl ErrorContext {
    pub fn new(fine: Mesh, alpha: FracOrder) -> Self {
        let lead = match lead_stencil(&fine, alpha) {
            Ok(st) => LeadOp::Toeplitz(ToeplitzOperator::new(&st)),
            Err(_) => LeadOp::Dense(assemble_lead_general(&fine, alpha)),
        };
        Self { fine, lead }
    }

    pub fn fine_mesh(&self) -> &Mesh {
        &self.fine
    }

    /// dᵀ A d for nodal values d at the interior fine nodes.
    pub fn energy_sq(&self, d: &[f64]) -> f64 {
        let ad = match &self.lead {
            LeadOp::Toeplitz(op) => op.apply(d),
            LeadOp::Dense(a) => a.matvec(d),
        };
        dot(d, &ad)
    }
}

fn merged_nodes(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(|x, y| x.total_cmp(y));
    all.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * y.abs().max(1e-300));
    all
}

/// L², energy and L∞ norms of exact − approximate.
pub fn error_norms(
    approx: Approximation<'_>,
    exact: &ExactSolution,
    which: WhichField,
    ctx: &ErrorContext,
) -> Result<ErrorNorms> {
    let err: Box<dyn Fn(f64) -> f64 + '_> = match (which, approx) {
        (WhichField::FullU, Approximation::Standard(s)) => Box::new(move |x| exact.u(x) - s.eval(x)),
        (WhichField::FullU, Approximation::Recon(s)) => Box::new(move |x| exact.u(x) - s.eval(x)),
        (WhichField::RegularPart, Approximation::Recon(s)) => Box::new(move |x| exact.u_r(x) - s.regular(x)),
        (WhichField::RegularPart, Approximation::Standard(_)) => {
            return Err(Error::Argument("regular-part errors need a reconstruction solution".into()))
        }
    };
    let nodes = merged_nodes(approx.mesh().nodes(), ctx.fine.nodes());
    let gl = gauss_legendre(8)?;
    let mut l2 = 0.0;
    let mut linf: f64 = 0.0;
    for &x in &nodes {
        linf = linf.max(err(x).abs());
    }
    for w in nodes.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        for (t, wt) in gl.nodes.iter().zip(&gl.weights) {
            let e = err(w[0] + half * (1.0 + t));
            l2 += half * wt * e * e;
            linf = linf.max(e.abs());
        }
    }
    let fine = ctx.fine.nodes();
    let d: Vec<f64> = fine[1..fine.len() - 1].iter().map(|&x| err(x)).collect();
    let energy = ctx.energy_sq(&d).max(0.0).sqrt();
    Ok(ErrorNorms { l2: l2.sqrt(), energy, linf })
}
