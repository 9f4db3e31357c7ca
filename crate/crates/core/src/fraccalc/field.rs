use super::powersum::{PowerSum, Side};
use super::quadrature::weighted_nodes;
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

type Smooth = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One summand g(x)·x^p with g smooth on each piece between breakpoints.
#[derive(Clone)]
pub struct FieldTerm {
    pub exponent: f64,
    smooth: Smooth,
}

impl FieldTerm {
    pub fn smooth(&self, x: f64) -> f64 {
        (self.smooth)(x)
    }
}

/// A scalar function on [0, 1] that carries its left-endpoint singularity
/// structure, so quadrature can resolve it. Optionally remembers an exact
/// [`PowerSum`] form, which unlocks closed-form fractional integrals.
#[derive(Clone, Default)]
pub struct Field {
    terms: Vec<FieldTerm>,
    breakpoints: Vec<f64>,
    closed_form: Option<PowerSum>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("exponents", &self.terms.iter().map(|t| t.exponent).collect::<Vec<_>>())
            .field("breakpoints", &self.breakpoints)
            .field("closed_form", &self.closed_form)
            .finish()
    }
}

impl Field {
    pub fn zero() -> Self {
        Self { closed_form: Some(PowerSum::new()), ..Self::default() }
    }

    pub fn constant(c: f64) -> Self {
        Self::polynomial(&[c])
    }

    /// Σ cₖ x^k.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let mut ps = PowerSum::new();
        for (k, &c) in coeffs.iter().enumerate() {
            ps = ps.left(c, 0.0, k as f64).expect("nonnegative integer exponent");
        }
        let cs = coeffs.to_vec();
        let term = FieldTerm {
            exponent: 0.0,
            smooth: Arc::new(move |x| cs.iter().rev().fold(0.0, |acc, c| acc * x + c)),
        };
        let terms = if coeffs.iter().all(|&c| c == 0.0) { Vec::new() } else { vec![term] };
        Self { terms, breakpoints: Vec::new(), closed_form: Some(ps) }
    }

    /// c·x^p, p > −1.
    pub fn power(c: f64, p: f64) -> Result<Self> {
        Self::from_power_sum(&PowerSum::monomial(c, p)?)
    }

    /// A function given by its values, with a declared behaviour x^hint at 0:
    /// f(x)/x^hint must be smooth on each piece between `breakpoints`.
    pub fn from_fn<F>(f: F, hint: f64, breakpoints: &[f64]) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(hint > -1.0) || !hint.is_finite() {
            return Err(Error::Argument(format!("singularity hint must exceed -1, got {hint}")));
        }
        let smooth: Smooth = if hint == 0.0 {
            Arc::new(f)
        } else {
            Arc::new(move |x: f64| f(x) * x.powf(-hint))
        };
        let mut out = Self { terms: vec![FieldTerm { exponent: hint, smooth }], ..Self::default() };
        out.add_breakpoints(breakpoints);
        Ok(out)
    }

    pub fn from_power_sum(ps: &PowerSum) -> Result<Self> {
        let mut out = Self { closed_form: Some(ps.clone()), ..Self::default() };
        for t in ps.terms() {
            let c = t.coeff;
            if t.side == Side::Left && t.anchor == 0.0 {
                out.terms.push(FieldTerm { exponent: t.exponent, smooth: Arc::new(move |_| c) });
            } else {
                let t = *t;
                out.terms.push(FieldTerm { exponent: 0.0, smooth: Arc::new(move |x| t.eval(x)) });
                out.add_breakpoints(&[t.anchor]);
            }
        }
        Ok(out)
    }

    fn add_breakpoints(&mut self, extra: &[f64]) {
        for &b in extra {
            if b > 0.0 && b < 1.0 && !self.breakpoints.contains(&b) {
                self.breakpoints.push(b);
            }
        }
        self.breakpoints.sort_by(|a, b| a.total_cmp(b));
    }

    pub fn terms(&self) -> &[FieldTerm] {
        &self.terms
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn closed_form(&self) -> Option<&PowerSum> {
        self.closed_form.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Most singular exponent among the terms (0 for smooth fields).
    pub fn min_exponent(&self) -> f64 {
        self.terms.iter().map(|t| t.exponent).fold(0.0, f64::min)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let s = t.smooth(x);
                if t.exponent == 0.0 { s } else { s * x.powf(t.exponent) }
            })
            .sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let g = t.smooth.clone();
                FieldTerm { exponent: t.exponent, smooth: Arc::new(move |x| c * g(x)) }
            })
            .collect();
        Self {
            terms,
            breakpoints: self.breakpoints.clone(),
            closed_form: self.closed_form.as_ref().map(|p| p.scaled(c)),
        }
    }

    pub fn plus(&self, other: &Field) -> Self {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out.add_breakpoints(&other.breakpoints);
        out.closed_form = match (&self.closed_form, &other.closed_form) {
            (Some(a), Some(b)) => Some(a.plus(b)),
            _ => None,
        };
        out
    }

    /// Pointwise product; exponents of paired terms add.
    pub fn times(&self, other: &Field) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let (ga, gb) = (a.smooth.clone(), b.smooth.clone());
                terms.push(FieldTerm {
                    exponent: a.exponent + b.exponent,
                    smooth: Arc::new(move |x| ga(x) * gb(x)),
                });
            }
        }
        let mut out = Self { terms, breakpoints: self.breakpoints.clone(), closed_form: None };
        out.add_breakpoints(&other.breakpoints);
        out
    }

    /// ∫ₐᵇ self(x)·(1−x)^re·w(x) dx, with w smooth on [a, b].
    pub fn integrate(
        &self,
        a: f64,
        b: f64,
        re: f64,
        w: &dyn Fn(f64) -> f64,
        n_gl: usize,
        n_gj: usize,
    ) -> f64 {
        if self.terms.is_empty() || b <= a {
            return 0.0;
        }
        let mut cuts = Vec::with_capacity(self.breakpoints.len() + 2);
        cuts.push(a);
        cuts.extend(self.breakpoints.iter().copied().filter(|&c| c > a && c < b));
        cuts.push(b);
        let mut pts = Vec::new();
        let mut acc = 0.0;
        for piece in cuts.windows(2) {
            for t in &self.terms {
                pts.clear();
                weighted_nodes(piece[0], piece[1], t.exponent, re, n_gl, n_gj, &mut pts);
                for &(x, wt) in &pts {
                    acc += wt * t.smooth(x) * w(x);
                }
            }
        }
        acc
    }

    /// Finite at n interior sample points and free of negative exponents.
    pub fn check_bounded(&self, n: usize) -> Result<()> {
        if self.terms.iter().any(|t| t.exponent < 0.0) {
            return Err(Error::Argument("field has a declared singularity at 0".into()));
        }
        for i in 0..n {
            let x = (i as f64 + 0.5) / n as f64;
            if !self.eval(x).is_finite() {
                return Err(Error::Argument(format!("field is not finite at x = {x}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::quadrature::{GJ_POINTS, GL_POINTS};
    use approx::assert_relative_eq;

    #[test]
    fn evaluation_and_algebra() {
        let q = Field::polynomial(&[0.0, 1.0, -1.0]);
        assert_relative_eq!(q.eval(0.3), 0.21, max_relative = 1e-15);
        let s = Field::power(1.0, 0.5).unwrap().plus(&Field::power(-1.0, 2.0).unwrap());
        let p = q.times(&s);
        let x = 0.7f64;
        assert_relative_eq!(p.eval(x), x * (1.0 - x) * (x.sqrt() - x * x), max_relative = 1e-14);
        assert_eq!(p.min_exponent(), 0.0);
        assert!(p.closed_form().is_none());
        assert!(Field::zero().is_zero());
        assert_eq!(q.scaled(0.0).eval(0.4), 0.0);
    }

    #[test]
    fn integrate_with_breakpoint_and_singularity() {
        let chi = Field::from_power_sum(&PowerSum::new().left(1.0, 0.0, 0.0).unwrap().left(-1.0, 0.5, 0.0).unwrap())
            .unwrap();
        assert_eq!(chi.breakpoints(), &[0.5]);
        let v = chi.integrate(0.0, 1.0, 0.0, &|x| x, GL_POINTS, GJ_POINTS);
        assert_relative_eq!(v, 0.125, max_relative = 1e-14);
        let c = Field::power(1.0, -0.25).unwrap();
        let v = c.integrate(0.0, 0.5, 0.0, &|_| 1.0, GL_POINTS, GJ_POINTS);
        assert_relative_eq!(v, 0.5f64.powf(0.75) / 0.75, max_relative = 1e-14);
    }

    #[test]
    fn from_fn_hint() {
        let f = Field::from_fn(|x: f64| x.powf(-0.25) * (1.0 + x), -0.25, &[]).unwrap();
        let v = f.integrate(0.0, 1.0, 0.0, &|_| 1.0, GL_POINTS, GJ_POINTS);
        assert_relative_eq!(v, 1.0 / 0.75 + 1.0 / 1.75, max_relative = 1e-13);
        assert!(Field::from_fn(|x| x, -1.0, &[]).is_err());
        assert!(f.check_bounded(100).is_err());
        assert!(Field::polynomial(&[1.0, 2.0]).check_bounded(1000).is_ok());
    }
}
