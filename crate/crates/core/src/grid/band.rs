use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Square banded matrix with `lower` sub-diagonals and `upper` super-diagonals.
///
/// Storage is row-major over the band: row `i` holds entries for columns
/// `i - lower ..= i + upper`, with out-of-range slots kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Self {
            n,
            lower,
            upper,
            data: vec![0.0; n * (lower + upper + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, 0, 0);
        out.data.iter_mut().for_each(|v| *v = 1.0);
        out
    }

    /// Builds a tridiagonal matrix from its three diagonals.
    pub fn tridiagonal(sub: &[f64], main: &[f64], sup: &[f64]) -> Result<Self> {
        let n = main.len();
        let off = n.saturating_sub(1);
        if sub.len() != off {
            return Err(Error::ShapeMismatch {
                expected: off,
                actual: sub.len(),
            });
        }
        if sup.len() != off {
            return Err(Error::ShapeMismatch {
                expected: off,
                actual: sup.len(),
            });
        }
        let mut out = Self::zeros(n, 1, 1);
        for i in 0..n {
            out.set(i, i, main[i]);
            if i + 1 < n {
                out.set(i, i + 1, sup[i]);
                out.set(i + 1, i, sub[i]);
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.lower
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.upper
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.lower >= i && j <= i + self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= self.n || j >= self.n || !self.in_band(i, j) {
            return 0.0;
        }
        self.data[i * self.width() + (j + self.lower - i)]
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let w = self.width();
        self.data[i * w + (j + self.lower - i)] = value;
    }

    /// Entries of the diagonal at `offset` (negative = below the main diagonal).
    pub fn diagonal(&self, offset: isize) -> Vec<f64> {
        let k = offset.unsigned_abs();
        if k >= self.n {
            return Vec::new();
        }
        (0..self.n - k)
            .map(|t| {
                if offset >= 0 {
                    self.get(t, t + k)
                } else {
                    self.get(t + k, t)
                }
            })
            .collect()
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        let lo = i.saturating_sub(self.lower);
        let hi = (i + self.upper).min(self.n - 1);
        (lo..=hi).map(|j| self.get(i, j)).sum()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.lower);
                let hi = (i + self.upper).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.lower);
            let hi = (i + self.upper).min(self.n - 1);
            for j in lo..=hi {
                out[j] += self.get(i, j) * x[i];
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// `I + self`.
    pub fn plus_identity(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            let v = out.get(i, i);
            out.set(i, i, v + 1.0);
        }
        out
    }

    /// Banded product; bandwidths add.
    pub fn mul(&self, other: &BandMatrix) -> Result<BandMatrix> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let n = self.n;
        let mut out = BandMatrix::zeros(n, self.lower + other.lower, self.upper + other.upper);
        for i in 0..n {
            let lo = i.saturating_sub(self.lower);
            let hi = (i + self.upper).min(n.saturating_sub(1));
            for k in lo..=hi {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let lo2 = k.saturating_sub(other.lower);
                let hi2 = (k + other.upper).min(n - 1);
                for j in lo2..=hi2 {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| {
            let hi = (i + self.upper.max(self.lower)).min(self.n.saturating_sub(1));
            (i..=hi).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol)
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

/// Thomas algorithm for a tridiagonal system. `sub[i]` couples row `i + 1`
/// to column `i`; `sup[i]` couples row `i` to column `i + 1`.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if rhs.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if sub.len() + 1 != n || sup.len() + 1 != n {
        return Err(Error::ShapeMismatch {
            expected: n - 1,
            actual: sub.len().min(sup.len()),
        });
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() < f64::MIN_POSITIVE {
        return Err(Error::Singular);
    }
    c[0] = if n > 1 { sup[0] / pivot } else { 0.0 };
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i - 1] * c[i - 1];
        if pivot.abs() < f64::MIN_POSITIVE {
            return Err(Error::Singular);
        }
        c[i] = if i + 1 < n { sup[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}
