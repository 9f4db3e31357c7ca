use super::dense::Matrix;
use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// n×n Toeplitz matrix T[i][j] = t(i − j), stored as the 2n − 1 values
/// t(−(n−1)), …, t(0), …, t(n−1).
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzStencil {
    n: usize,
    diags: Vec<f64>,
}

impl ToeplitzStencil {
    pub fn new(diags: Vec<f64>) -> Result<Self> {
        if diags.len().is_multiple_of(2) {
            return Err(Error::Argument(format!("stencil length must be odd, got {}", diags.len())));
        }
        Ok(Self { n: diags.len().div_ceil(2), diags })
    }

    pub fn from_fn(n: usize, mut t: impl FnMut(isize) -> f64) -> Self {
        let k = n as isize;
        Self { n, diags: (-(k - 1)..k).map(&mut t).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.diags
    }

    /// t(d) for d = i − j.
    pub fn diag(&self, d: isize) -> f64 {
        self.diags[(d + self.n as isize - 1) as usize]
    }

    pub fn to_dense(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.diag(i as isize - j as isize))
    }
}

const DIRECT_MAX: usize = 64;

/// Repeated Toeplitz products through a circulant embedding; the transform
/// of the embedded column is computed once.
pub struct ToeplitzOperator {
    n: usize,
    direct: Option<ToeplitzStencil>,
    len: usize,
    symbol: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl ToeplitzOperator {
    pub fn new(stencil: &ToeplitzStencil) -> Self {
        let n = stencil.n();
        let len = (2 * n).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);
        if n <= DIRECT_MAX {
            return Self { n, direct: Some(stencil.clone()), len, symbol: Vec::new(), fwd, inv };
        }
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        for (d, z) in c.iter_mut().take(n).enumerate() {
            z.re = stencil.diag(d as isize);
        }
        for d in 1..n {
            c[len - d].re = stencil.diag(-(d as isize));
        }
        fwd.process(&mut c);
        Self { n, direct: None, len, symbol: c, fwd, inv }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        if let Some(st) = &self.direct {
            return (0..self.n)
                .map(|i| (0..self.n).map(|j| st.diag(i as isize - j as isize) * x[j]).sum())
                .collect();
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for (b, &v) in buf.iter_mut().zip(x) {
            b.re = v;
        }
        self.fwd.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.symbol) {
            *b *= s;
        }
        self.inv.process(&mut buf);
        let scale = 1.0 / self.len as f64;
        buf[..self.n].iter().map(|c| c.re * scale).collect()
    }
}

/// y = T x for the Toeplitz matrix with the given 2n − 1 diagonals.
pub fn toeplitz_matvec(stencil: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    if stencil.len() + 1 != 2 * x.len() {
        return Err(Error::Argument(format!(
            "stencil of length {} does not fit a vector of length {}",
            stencil.len(),
            x.len()
        )));
    }
    let st = ToeplitzStencil::new(stencil.to_vec())?;
    Ok(ToeplitzOperator::new(&st).apply(x))
}
