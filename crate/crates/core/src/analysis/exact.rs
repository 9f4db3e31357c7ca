use crate::assembly::{BoundaryCondition, ProblemSpec};
use crate::error::{Error, Result};
use crate::fraccalc::{Field, PowerSum};
use crate::mesh::Mesh;
use crate::solver::{solve_reconstruction, ReconSolution};

/// The three sources used in the convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    /// f = x(1 − x)
    A,
    /// f = χ_[0,1/2]
    B,
    /// f = x^{−1/4}
    C,
}

impl Example {
    pub fn source(self) -> PowerSum {
        let ps = match self {
            Example::A => PowerSum::new().left(1.0, 0.0, 1.0).and_then(|p| p.left(-1.0, 0.0, 2.0)),
            Example::B => PowerSum::new().left(1.0, 0.0, 0.0).and_then(|p| p.left(-1.0, 0.5, 0.0)),
            Example::C => PowerSum::monomial(1.0, -0.25),
        };
        ps.expect("catalog sources are valid")
    }

    pub fn field(self) -> Field {
        Field::from_power_sum(&self.source()).expect("catalog sources are valid")
    }

    /// Sobolev-type smoothness index γ of the source.
    pub fn smoothness(self) -> f64 {
        match self {
            Example::A => 1.0,
            Example::B => 0.5,
            Example::C => 0.25,
        }
    }
}

/// q = x(1 − x).
pub fn potential_x_times_1mx() -> Field {
    Field::polynomial(&[0.0, 1.0, -1.0])
}

/// Solution used as ground truth in error measurements.
#[derive(Debug, Clone)]
pub enum ExactSolution {
    ClosedForm { u: PowerSum, u_r: PowerSum, mu: f64, bc: BoundaryCondition },
    Reference(Box<ReconSolution>),
}

impl ExactSolution {
    pub fn u(&self, x: f64) -> f64 {
        match self {
            ExactSolution::ClosedForm { u, .. } => u.eval(x),
            ExactSolution::Reference(s) => s.eval(x),
        }
    }

    pub fn u_r(&self, x: f64) -> f64 {
        match self {
            ExactSolution::ClosedForm { u_r, .. } => u_r.eval(x),
            ExactSolution::Reference(s) => s.regular(x),
        }
    }

    pub fn mu(&self) -> f64 {
        match self {
            ExactSolution::ClosedForm { mu, .. } => *mu,
            ExactSolution::Reference(s) => s.mu_h,
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self, ExactSolution::ClosedForm { .. })
    }
}

/// For q ≡ 0: u = −₀I^α f + μ x^p and uʳ = −₀I^α f + μ x², μ = (₀I^α f)(1).
pub fn exact_q0(spec: &ProblemSpec) -> Result<ExactSolution> {
    if !spec.q().is_zero() {
        return Err(Error::Argument("closed-form solutions need q = 0".into()));
    }
    let f = spec
        .f()
        .closed_form()
        .filter(|p| p.is_left())
        .ok_or_else(|| Error::UnsupportedSource("source has no closed-form fractional integral".into()))?;
    let a = spec.alpha().value();
    let neg_int = f.rl_integral(a)?.scaled(-1.0);
    let mu = -neg_int.eval(1.0);
    let u = neg_int.plus(&PowerSum::monomial(mu, spec.singular_exponent())?);
    let u_r = neg_int.plus(&PowerSum::monomial(mu, 2.0)?);
    Ok(ExactSolution::ClosedForm { u, u_r, mu, bc: spec.bc() })
}

/// Reconstruction solution on a uniform mesh with `fine_m` elements.
pub fn reference_solution(spec: &ProblemSpec, fine_m: usize) -> Result<ExactSolution> {
    let mesh = Mesh::uniform(fine_m)?;
    Ok(ExactSolution::Reference(Box::new(solve_reconstruction(spec, &mesh)?)))
}
