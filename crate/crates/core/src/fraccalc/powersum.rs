use super::gamma::{gamma_any, rgamma};
use crate::error::{Error, Result};

/// Order α of the leading derivative, 1 < α < 2.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 1.0 && alpha < 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Argument(format!("order must lie in (1, 2), got {alpha}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// s = α/2, the order of each half of the bilinear form.
    pub fn half(self) -> f64 {
        0.5 * self.0
    }

    pub fn admits_mixed(self) -> bool {
        self.0 > 1.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// (x − a)₊^p
    Left,
    /// (a − x)₊^p
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub anchor: f64,
    pub exponent: f64,
    pub side: Side,
}

impl PowerTerm {
    pub fn eval(&self, x: f64) -> f64 {
        let d = match self.side {
            Side::Left => x - self.anchor,
            Side::Right => self.anchor - x,
        };
        if d > 0.0 {
            self.coeff * d.powf(self.exponent)
        } else {
            0.0
        }
    }
}

/// Finite sum of one-sided shifted powers Σ cᵢ (±(x − aᵢ))₊^{pᵢ}.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
}

impl PowerSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = PowerTerm>) -> Result<Self> {
        let mut s = Self::new();
        for t in terms {
            s.push(t)?;
        }
        Ok(s)
    }

    /// c·x^p anchored at the origin.
    pub fn monomial(coeff: f64, exponent: f64) -> Result<Self> {
        Self::new().left(coeff, 0.0, exponent)
    }

    pub fn left(mut self, coeff: f64, anchor: f64, exponent: f64) -> Result<Self> {
        self.push(PowerTerm { coeff, anchor, exponent, side: Side::Left })?;
        Ok(self)
    }

    pub fn right(mut self, coeff: f64, anchor: f64, exponent: f64) -> Result<Self> {
        self.push(PowerTerm { coeff, anchor, exponent, side: Side::Right })?;
        Ok(self)
    }

    pub fn push(&mut self, t: PowerTerm) -> Result<()> {
        if !(t.exponent > -1.0) || !t.exponent.is_finite() {
            return Err(Error::Argument(format!("exponent must exceed -1, got {}", t.exponent)));
        }
        if !(0.0..=1.0).contains(&t.anchor) {
            return Err(Error::Argument(format!("anchor must lie in [0, 1], got {}", t.anchor)));
        }
        if !t.coeff.is_finite() {
            return Err(Error::Argument("non-finite coefficient".into()));
        }
        if t.coeff != 0.0 {
            self.terms.push(t);
        }
        Ok(())
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_left(&self) -> bool {
        self.terms.iter().all(|t| t.side == Side::Left)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let terms = if c == 0.0 {
            Vec::new()
        } else {
            self.terms.iter().map(|t| PowerTerm { coeff: t.coeff * c, ..*t }).collect()
        };
        Self { terms }
    }

    pub fn plus(&self, other: &PowerSum) -> Self {
        let mut out = self.clone();
        out.terms.extend_from_slice(&other.terms);
        out.merge_like_terms();
        out
    }

    fn merge_like_terms(&mut self) {
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match merged.iter_mut().find(|m| {
                m.side == t.side && m.anchor == t.anchor && m.exponent == t.exponent
            }) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(*t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
    }

    /// Closed-form ₀I^γ of a left-anchored sum.
    pub fn rl_integral(&self, gamma: f64) -> Result<PowerSum> {
        if !(gamma > 0.0) {
            return Err(Error::Domain(format!("integral order must be positive, got {gamma}")));
        }
        if !self.is_left() {
            return Err(Error::UnsupportedForm(
                "left-sided integral of a right-anchored power".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| PowerTerm {
                coeff: t.coeff * gamma_any(t.exponent + 1.0) * rgamma(t.exponent + 1.0 + gamma),
                exponent: t.exponent + gamma,
                ..*t
            })
            .collect();
        Ok(PowerSum { terms })
    }
}

/// (₀I^γ t^β)(x) = Γ(β+1)/Γ(β+1+γ)·x^{β+γ}.
pub fn rl_integral_power(gamma: f64, beta_exp: f64, x: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("integral order must be positive, got {gamma}")));
    }
    if !(beta_exp > -1.0) {
        return Err(Error::Domain(format!("exponent must exceed -1, got {beta_exp}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(gamma_any(beta_exp + 1.0) * rgamma(beta_exp + 1.0 + gamma) * x.powf(beta_exp + gamma))
}

/// D₀^β x^p at x. Vanishes identically when p + 1 − β is a nonpositive
/// integer (the kernel of the derivative); such arguments are snapped.
pub fn rl_derivative_power(beta_order: f64, p_exp: f64, x: f64) -> f64 {
    let k = p_exp + 1.0 - beta_order;
    if k <= 0.5 && (k - k.round()).abs() <= 1e-12 * beta_order.abs().max(1.0) {
        return 0.0;
    }
    gamma_any(p_exp + 1.0) * rgamma(k) * x.powf(p_exp - beta_order)
}

/// (₀I^γ g)(x) for a left-anchored power sum.
pub fn rl_integral_powersum_at(gamma: f64, g: &PowerSum, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(g.rl_integral(gamma)?.eval(x))
}
