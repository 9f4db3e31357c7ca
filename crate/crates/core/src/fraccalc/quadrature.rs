use super::field::Field;
use super::gamma::{ln_gamma_pos, rgamma};
use super::powersum::FracOrder;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

/// Nodes and weights on the reference interval [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Points per element for smooth integrands.
pub(crate) const GL_POINTS: usize = 12;
/// Points per element carrying an endpoint singularity.
pub(crate) const GJ_POINTS: usize = 24;

const GL_CACHE_MAX: usize = 64;
static GL_CACHE: [OnceLock<Rule>; GL_CACHE_MAX + 1] = [const { OnceLock::new() }; GL_CACHE_MAX + 1];

/// Gauss–Legendre rule with `n` points.
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Argument("quadrature needs at least one point".into()));
    }
    if n <= GL_CACHE_MAX {
        return Ok(gl_cached(n).clone());
    }
    gauss_jacobi(n, 0.0, 0.0)
}

pub(crate) fn gl_cached(n: usize) -> &'static Rule {
    GL_CACHE[n].get_or_init(|| gauss_jacobi(n, 0.0, 0.0).expect("valid Legendre rule"))
}

/// Values (P_n, P_{n−1}) of the Jacobi polynomials for weight (1−t)^a (1+t)^b.
fn jacobi_pair(n: usize, a: f64, b: f64, t: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p = (a + 1.0) + 0.5 * (a + b + 2.0) * (t - 1.0);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let lhs = 2.0 * k * (k + a + b) * (c - 2.0);
        let next = ((c - 1.0) * (c * (c - 2.0) * t + a * a - b * b) * p
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p_prev)
            / lhs;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

fn jacobi_derivative(n: usize, a: f64, b: f64, t: f64, pn: f64, pn1: f64) -> f64 {
    let nf = n as f64;
    let c = 2.0 * nf + a + b;
    (nf * ((a - b) - c * t) * pn + 2.0 * (nf + a) * (nf + b) * pn1) / (c * (1.0 - t * t))
}

/// Gauss–Jacobi rule for ∫₋₁¹ (1−t)^a (1+t)^b g(t) dt. Nodes come from the
/// Golub–Welsch eigenproblem and are polished by Newton on the recurrence.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Argument("quadrature needs at least one point".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Argument(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    let ab = a + b;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        jm[(k, k)] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (c * (c + 2.0))
        };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let c1 = 2.0 * k1 + ab;
            let sq = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) / (c1 * c1 * (c1 + 1.0) * (c1 - 1.0))
            };
            let off = sq.sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.total_cmp(y));

    let log_c = ln_gamma_pos(n as f64 + a + 1.0) + ln_gamma_pos(n as f64 + b + 1.0)
        - ln_gamma_pos(n as f64 + ab + 1.0)
        - ln_gamma_pos(n as f64 + 1.0)
        + (ab + 1.0) * std::f64::consts::LN_2;
    let mut weights = Vec::with_capacity(n);
    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let (pn, pn1) = jacobi_pair(n, a, b, *t);
            let d = jacobi_derivative(n, a, b, *t, pn, pn1);
            let step = pn / d;
            let cand = *t - step;
            if cand.is_finite() && cand.abs() < 1.0 {
                *t = cand;
            }
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (pn, pn1) = jacobi_pair(n, a, b, *t);
        let d = jacobi_derivative(n, a, b, *t, pn, pn1);
        weights.push(log_c.exp() / ((1.0 - *t * *t) * d * d));
    }
    Ok(Rule { nodes, weights })
}

/// Nonzero exponents that are not nonnegative integers spoil polynomial
/// exactness and need a dedicated rule.
pub(crate) fn is_singular_exponent(p: f64) -> bool {
    p != 0.0 && !(p > 0.0 && p.fract() == 0.0)
}

/// Appends (x, w) so that Σ w·g(x) ≈ ∫ₐᵇ x^le (1−x)^re g(x) dx for g smooth
/// on [a, b] ⊂ [0, 1]. Endpoint singularities use Gauss–Jacobi on the
/// touching element and geometric refinement on nearby ones.
pub(crate) fn weighted_nodes(
    a: f64,
    b: f64,
    le: f64,
    re: f64,
    n_gl: usize,
    n_gj: usize,
    out: &mut Vec<(f64, f64)>,
) {
    if b <= a {
        return;
    }
    let sing_l = is_singular_exponent(le);
    let sing_r = is_singular_exponent(re);
    if sing_l && sing_r && a == 0.0 && b == 1.0 {
        weighted_nodes(0.0, 0.5, le, re, n_gl, n_gj, out);
        weighted_nodes(0.5, 1.0, le, re, n_gl, n_gj, out);
        return;
    }
    if sing_l && a == 0.0 {
        let rule = gauss_jacobi(n_gj, 0.0, le).expect("valid Jacobi exponents");
        let half = 0.5 * b;
        let scale = half.powf(le + 1.0);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let x = half * (1.0 + t);
            out.push((x, scale * w * (1.0 - x).powf(re)));
        }
        return;
    }
    if sing_r && b == 1.0 {
        let rule = gauss_jacobi(n_gj, re, 0.0).expect("valid Jacobi exponents");
        let half = 0.5 * (1.0 - a);
        let scale = half.powf(re + 1.0);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let x = a + half * (1.0 + t);
            out.push((x, scale * w * x.powf(le)));
        }
        return;
    }
    if sing_l && b - a > a {
        let mid = 2.0 * a;
        weighted_nodes(a, mid, le, re, n_gl, n_gj, out);
        weighted_nodes(mid, b, le, re, n_gl, n_gj, out);
        return;
    }
    if sing_r && b - a > 1.0 - b {
        let mid = 1.0 - 2.0 * (1.0 - b);
        weighted_nodes(a, mid, le, re, n_gl, n_gj, out);
        weighted_nodes(mid, b, le, re, n_gl, n_gj, out);
        return;
    }
    let rule = gl_cached(n_gl);
    let half = 0.5 * (b - a);
    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
        let x = a + half * (1.0 + t);
        let mut weight = half * w;
        if le != 0.0 {
            weight *= x.powf(le);
        }
        if re != 0.0 {
            weight *= (1.0 - x).powf(re);
        }
        out.push((x, weight));
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

const MAX_PANELS: usize = 5000;

/// Globally adaptive Gauss–Kronrod (7/15) integration of f over [a, b].
/// Stops when the summed error estimate is below max(rel_tol·|I|, abs_tol).
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(b >= a) {
        return Err(Error::Argument(format!("invalid interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let (val, err) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, val, err });
    let (mut total, mut total_err) = (val, err);
    let mut frozen_err = 0.0;
    loop {
        if !total.is_finite() {
            return Err(Error::QuadratureFailure { residual: f64::INFINITY });
        }
        if total_err <= rel_tol * total.abs() || total_err <= abs_tol {
            return Ok(total);
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailure { residual: total_err });
        }
        let Some(p) = heap.pop() else {
            return Err(Error::QuadratureFailure { residual: total_err });
        };
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // panel at floating-point resolution: accept its estimate as is
            frozen_err += p.err;
            if heap.is_empty() {
                return if frozen_err <= rel_tol * total.abs() || frozen_err <= abs_tol {
                    Ok(total)
                } else {
                    Err(Error::QuadratureFailure { residual: frozen_err })
                };
            }
            continue;
        }
        let (v1, e1) = gk15(&f, p.a, mid);
        let (v2, e2) = gk15(&f, mid, p.b);
        total += v1 + v2 - p.val;
        total_err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: mid, val: v1, err: e1 });
        heap.push(Panel { a: mid, b: p.b, val: v2, err: e2 });
        // refresh the running error sum to avoid drift from cancellation
        if heap.len() % 256 == 0 {
            total_err = frozen_err + heap.iter().map(|q| q.err).sum::<f64>();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    /// Per-piece Gauss–Legendre, blind to endpoint singularities.
    GaussLegendre,
    /// Gauss–Jacobi on pieces touching a singular endpoint, with exponents
    /// taken from the weight and from the integrand's singularity hints.
    GaussJacobi,
    /// Globally adaptive Gauss–Kronrod to a relative tolerance.
    AdaptiveComposite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub points: usize,
    pub tol: f64,
}

impl QuadratureRule {
    pub fn new(kind: QuadratureKind, points: usize, tol: f64) -> Result<Self> {
        if points == 0 || !(tol > 0.0) {
            return Err(Error::Argument(format!(
                "quadrature rule needs points >= 1 and tol > 0, got ({points}, {tol})"
            )));
        }
        Ok(Self { kind, points, tol })
    }

    /// 32-point Gauss–Jacobi, the default for endpoint-weighted moments.
    pub fn endpoint_default() -> Self {
        Self { kind: QuadratureKind::GaussJacobi, points: 32, tol: 1e-12 }
    }

    pub fn adaptive(tol: f64) -> Self {
        Self { kind: QuadratureKind::AdaptiveComposite, points: 15, tol }
    }
}

/// (₀I^α g)(1) = (1/Γ(α)) ∫₀¹ (1−t)^{α−1} g(t) dt.
pub fn weighted_endpoint_integral(g: &Field, alpha: FracOrder, rule: &QuadratureRule) -> Result<f64> {
    let a = alpha.value();
    let raw = match rule.kind {
        QuadratureKind::GaussJacobi => g.integrate(0.0, 1.0, a - 1.0, &|_| 1.0, rule.points, rule.points),
        QuadratureKind::GaussLegendre => {
            let mut acc = 0.0;
            let mut cuts = vec![0.0];
            cuts.extend(g.breakpoints().iter().copied().filter(|&c| c > 0.0 && c < 1.0));
            cuts.push(1.0);
            let rule_ref = gauss_legendre(rule.points)?;
            for w in cuts.windows(2) {
                let half = 0.5 * (w[1] - w[0]);
                for (t, wt) in rule_ref.nodes.iter().zip(&rule_ref.weights) {
                    let x = w[0] + half * (1.0 + t);
                    acc += half * wt * (1.0 - x).powf(a - 1.0) * g.eval(x);
                }
            }
            acc
        }
        QuadratureKind::AdaptiveComposite => {
            let mut cuts = vec![0.0];
            cuts.extend(g.breakpoints().iter().copied().filter(|&c| c > 0.0 && c < 1.0));
            cuts.push(1.0);
            let mut acc = 0.0;
            for w in cuts.windows(2) {
                acc += adaptive_integrate(
                    |t| (1.0 - t).powf(a - 1.0) * g.eval(t),
                    w[0],
                    w[1],
                    rule.tol,
                    rule.tol * 1e-6,
                )?;
            }
            acc
        }
    };
    Ok(raw * rgamma(a))
}
