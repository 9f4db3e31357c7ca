use crate::assembly::{BoundaryCondition, Method};

/// log₂(eₖ / eₖ₊₁) for successive levels; `None` where an error vanishes.
pub fn rates(errors: &[f64]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| if w[0] > 0.0 && w[1] > 0.0 { Some((w[0] / w[1]).log2()) } else { None })
        .collect()
}

/// Mean of the successive rates over the last `tail` pairs (all pairs when
/// `tail` is 0 or too large).
pub fn mean_rate(errors: &[f64], tail: usize) -> Option<f64> {
    let r = rates(errors);
    let take = if tail == 0 || tail > r.len() { r.len() } else { tail };
    let slice = &r[r.len() - take..];
    if slice.is_empty() || slice.iter().any(Option::is_none) {
        return None;
    }
    Some(slice.iter().map(|v| v.unwrap()).sum::<f64>() / take as f64)
}

/// Predicted exponents, for β → 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedRates {
    pub beta: f64,
    pub gamma: f64,
    pub ell: f64,
    pub l2: f64,
    pub energy: f64,
    pub linf: f64,
    pub mu: Option<f64>,
}

/// ℓ(β, γ) = min(α − 1 + β, γ).
pub fn ell(alpha: f64, beta: f64, gamma: f64) -> f64 {
    (alpha - 1.0 + beta).min(gamma)
}

/// ℓₙ(β, γ) = min(α − 2 + β, γ), for the mixed problem.
pub fn ell_mixed(alpha: f64, beta: f64, gamma: f64) -> f64 {
    (alpha - 2.0 + beta).min(gamma)
}

pub const BETA: f64 = 0.5;

impl ExpectedRates {
    /// Plain Galerkin: α − 2 + 2β in L² and L∞, α/2 − 1 + β in energy.
    pub fn standard(alpha: f64, gamma: f64) -> Self {
        let beta = BETA;
        Self {
            beta,
            gamma,
            ell: ell(alpha, beta, gamma),
            l2: alpha - 2.0 + 2.0 * beta,
            energy: alpha / 2.0 - 1.0 + beta,
            linf: alpha - 2.0 + 2.0 * beta,
            mu: None,
        }
    }

    /// Regular part of the reconstruction: with r = min(2, α + ℓ),
    /// r − 1 + β in L² and L∞, r − α/2 in energy.
    pub fn reconstruction(alpha: f64, gamma: f64, bc: BoundaryCondition) -> Self {
        let beta = BETA;
        let l = match bc {
            BoundaryCondition::Dirichlet => ell(alpha, beta, gamma),
            BoundaryCondition::MixedLeftNeumann => ell_mixed(alpha, beta, gamma),
        };
        let r = (alpha + l).min(2.0);
        let l2 = r - 1.0 + beta;
        Self { beta, gamma, ell: l, l2, energy: r - alpha / 2.0, linf: l2, mu: Some(l2) }
    }

    pub fn for_method(method: Method, alpha: f64, gamma: f64, bc: BoundaryCondition) -> Self {
        match method {
            Method::Standard => Self::standard(alpha, gamma),
            Method::Reconstruction => Self::reconstruction(alpha, gamma, bc),
        }
    }
}

/// Errors of one mesh level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRow {
    pub k: u32,
    pub h: f64,
    pub err_l2: f64,
    pub err_energy: f64,
    pub err_linf: f64,
    pub err_mu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub alpha: f64,
    pub rows: Vec<LevelRow>,
    pub expected: Option<ExpectedRates>,
}

impl ConvergenceReport {
    pub fn column(&self, f: impl Fn(&LevelRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    pub fn rates_l2(&self) -> Vec<Option<f64>> {
        rates(&self.column(|r| r.err_l2))
    }

    pub fn rates_energy(&self) -> Vec<Option<f64>> {
        rates(&self.column(|r| r.err_energy))
    }

    pub fn rates_linf(&self) -> Vec<Option<f64>> {
        rates(&self.column(|r| r.err_linf))
    }

    pub fn rates_mu(&self) -> Vec<Option<f64>> {
        if self.rows.iter().any(|r| r.err_mu.is_none()) {
            return vec![None; self.rows.len().saturating_sub(1)];
        }
        rates(&self.column(|r| r.err_mu.unwrap_or(0.0)))
    }
}
