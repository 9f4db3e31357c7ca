use crate::error::{Error, Result};

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// off[i] = M[i][i+1] = M[i+1][i]
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self { diag: vec![0.0; n], off: vec![0.0; n.saturating_sub(1)] }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.off[i.min(j)],
            _ => 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().chain(&self.off).all(|&v| v == 0.0)
    }

    pub fn matvec_add(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] += acc;
        }
    }

    pub fn to_dense(&self) -> Matrix {
        Matrix::from_fn(self.n(), |i, j| self.get(i, j))
    }
}

const PIVOT_RTOL: f64 = 1e-14;

/// LU factorisation with partial pivoting, PA = LU.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(mut a: Matrix) -> Result<Self> {
        let n = a.n();
        let thresh = PIVOT_RTOL * a.norm_inf();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pv) = (k..n)
                .map(|i| (i, a.get(i, k).abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if !(pv > thresh) {
                return Err(Error::SingularSystem { column: k, pivot: pv });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
            }
            let (upper, lower) = a.data.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n..];
            let piv = pivot_row[k];
            for row in lower.chunks_exact_mut(n) {
                let l = row[k] / piv;
                row[k] = l;
                if l != 0.0 {
                    for (r, u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *r -= l * u;
                    }
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            x[i] -= dot(&row[..i], &x[..i]);
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = dot(&row[i + 1..], &x[i + 1..]);
            x[i] = (x[i] - s) / row[i];
        }
        x
    }
}

/// LU for a lower Hessenberg matrix H (zero above the first superdiagonal)
/// in O(n²), by eliminating its upper Hessenberg transpose.
#[derive(Debug, Clone)]
pub struct HessenbergLu {
    u: Matrix,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl HessenbergLu {
    /// `t` is the transpose Hᵀ.
    pub fn factor_transposed(mut t: Matrix) -> Result<Self> {
        let n = t.n();
        let thresh = PIVOT_RTOL * t.norm_inf().max(t.transpose_norm_inf_hint());
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            if t.get(k + 1, k).abs() > t.get(k, k).abs() {
                swapped[k] = true;
                let (a, b) = t.data.split_at_mut((k + 1) * n);
                a[k * n + k..(k + 1) * n].swap_with_slice(&mut b[k..n]);
            }
            let piv = t.get(k, k);
            if !(piv.abs() > thresh) {
                return Err(Error::SingularSystem { column: k, pivot: piv.abs() });
            }
            let l = t.get(k + 1, k) / piv;
            mult[k] = l;
            if l != 0.0 {
                let (a, b) = t.data.split_at_mut((k + 1) * n);
                let rk = &a[k * n + k..(k + 1) * n];
                for (r, u) in b[k..n].iter_mut().zip(rk) {
                    *r -= l * u;
                }
            }
        }
        if n > 0 {
            let piv = t.get(n - 1, n - 1);
            if !(piv.abs() > thresh) {
                return Err(Error::SingularSystem { column: n - 1, pivot: piv.abs() });
            }
        }
        Ok(Self { u: t, mult, swapped })
    }

    /// Solves H x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.u.n();
        // Uᵀ y = b, column-oriented over the rows of U
        let mut y = b.to_vec();
        for j in 0..n {
            let row = self.u.row(j);
            let yj = y[j] / row[j];
            y[j] = yj;
            for (yi, u) in y[j + 1..].iter_mut().zip(&row[j + 1..]) {
                *yi -= u * yj;
            }
        }
        for k in (0..n.saturating_sub(1)).rev() {
            y[k] -= self.mult[k] * y[k + 1];
            if self.swapped[k] {
                y.swap(k, k + 1);
            }
        }
        y
    }
}

impl Matrix {
    // column sums give ‖Hᵀ‖∞ = ‖H‖₁; use the larger norm for the pivot floor
    fn transpose_norm_inf_hint(&self) -> f64 {
        let mut col = vec![0.0; self.n];
        for i in 0..self.n {
            for (c, v) in col.iter_mut().zip(self.row(i)) {
                *c += v.abs();
            }
        }
        col.into_iter().fold(0.0, f64::max)
    }
}
