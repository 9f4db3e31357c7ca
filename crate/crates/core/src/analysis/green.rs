use crate::fraccalc::{rgamma, FracOrder};

/// Green's function of −D₀^α with homogeneous Dirichlet data:
/// G(x, y) = [(1−y)^{α−1} x^{α−1} − (x−y)₊^{α−1}] / Γ(α).
pub fn green_q0(alpha: FracOrder, x: f64, y: f64) -> f64 {
    let p = alpha.value() - 1.0;
    let first = ((1.0 - y).max(0.0) * x.max(0.0)).powf(p);
    let second = if x > y { (x - y).powf(p) } else { 0.0 };
    (first - second) * rgamma(alpha.value())
}
