#![allow(dead_code)]

use fracfem::fraccalc::{adaptive_integrate, PowerSum};
use fracfem::Side;

/// ∫ₐᵇ f with t = a + s^k on the left half and t = b − s^k on the right half.
/// `f` gets (t, t − a, b − t); singular factors should use the distances.
pub fn oracle_integral(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64, k: i32) -> f64 {
    let (kf, len) = (k as f64, b - a);
    let h = (0.5 * len).powf(1.0 / kf);
    let jac = |s: f64| kf * s.powi(k - 1);
    let left = adaptive_integrate(|s| f(a + s.powi(k), s.powi(k), len - s.powi(k)) * jac(s), 0.0, h, 1e-12, 1e-14);
    let right = adaptive_integrate(|s| f(b - s.powi(k), len - s.powi(k), s.powi(k)) * jac(s), 0.0, h, 1e-12, 1e-14);
    left.unwrap() + right.unwrap()
}

/// Evaluates a power sum at a + d without rounding d into a first.
pub fn eval_near(ps: &PowerSum, a: f64, d: f64) -> f64 {
    ps.terms()
        .iter()
        .map(|t| {
            let r = match t.side {
                Side::Left => (a - t.anchor) + d,
                Side::Right => (t.anchor - a) - d,
            };
            if r > 0.0 {
                t.coeff * r.powf(t.exponent)
            } else {
                0.0
            }
        })
        .sum()
}

/// ∫ₐᵇ f for smooth f by 20-point Gauss–Legendre.
pub fn gl(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let rule = fracfem::fraccalc::gauss_legendre(20).unwrap();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}
