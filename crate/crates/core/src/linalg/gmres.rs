use super::dense::{dot, norm_inf};
use crate::error::{Error, Result};

pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

#[derive(Debug, Clone, Copy)]
pub struct GmresConfig {
    pub restart: usize,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self { restart: 50, max_iters: 2000, tol: 1e-10 }
    }
}

#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Restarted GMRES from a zero initial guess, unpreconditioned. Converged
/// when ‖b − Ax‖₂ ≤ tol·‖b‖₂.
pub fn gmres(op: &dyn LinearOperator, b: &[f64], cfg: &GmresConfig) -> Result<GmresOutcome> {
    let n = op.dim();
    let bnorm = norm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 || norm_inf(b) == 0.0 {
        return Ok(GmresOutcome { x, iterations: 0, residual: 0.0 });
    }
    let m = cfg.restart.max(1).min(n.max(1));
    let mut iters = 0;
    let mut r = vec![0.0; n];
    let mut work = vec![0.0; n];
    loop {
        op.apply(&x, &mut work);
        for i in 0..n {
            r[i] = b[i] - work[i];
        }
        let beta = norm2(&r);
        let mut rel = beta / bnorm;
        if rel <= cfg.tol {
            return Ok(GmresOutcome { x, iterations: iters, residual: rel });
        }
        if iters >= cfg.max_iters {
            return Err(Error::IterativeFailure { iterations: iters, residual: rel });
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|ri| ri / beta).collect()];
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            let mut w = vec![0.0; n];
            op.apply(&v[k], &mut w);
            // modified Gram–Schmidt
            for (j, vj) in v.iter().enumerate() {
                let hj = dot(&w, vj);
                h[j][k] = hj;
                for (wi, vi) in w.iter_mut().zip(vj) {
                    *wi -= hj * vi;
                }
            }
            let hn = norm2(&w);
            h[k + 1][k] = hn;
            for j in 0..k {
                let t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
                h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
                h[j][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == 0.0 {
                cs[k] = 1.0;
                sn[k] = 0.0;
            } else {
                cs[k] = h[k][k] / denom;
                sn[k] = h[k + 1][k] / denom;
            }
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            iters += 1;
            k_used = k + 1;
            rel = g[k + 1].abs() / bnorm;
            if rel <= cfg.tol || iters >= cfg.max_iters || hn == 0.0 {
                break;
            }
            v.push(w.iter().map(|wi| wi / hn).collect());
        }
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = if h[i][i] != 0.0 { (g[i] - s) / h[i][i] } else { 0.0 };
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&v[j]) {
                *xi += yj * vi;
            }
        }
    }
}
