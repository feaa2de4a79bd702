//! Minimal matrix-free operator interface shared by the norm estimators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::BlockSystem;

pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>>;
}

/// Operators with a cheap exact solve.
pub trait InvertibleOperator: LinearOperator {
    fn solve(&self, y: &[f64]) -> Result<Vec<f64>>;
    fn solve_transpose(&self, y: &[f64]) -> Result<Vec<f64>>;
}

impl LinearOperator for BlockSystem {
    fn dim(&self) -> usize {
        BlockSystem::dim(self)
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        BlockSystem::apply(self, x)
    }

    fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        BlockSystem::apply_transpose(self, x)
    }
}

impl InvertibleOperator for BlockSystem {
    fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        BlockSystem::solve(self, y)
    }

    fn solve_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        BlockSystem::solve_transpose(self, y)
    }
}

/// Square dense matrix; solves go through an LU factorization computed once.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: DMatrix<f64>,
    lu: Option<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
    lu_t: Option<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let scale = matrix.amax();
        let invertible = |lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>| {
            let u = lu.u();
            scale > 0.0 && u.diagonal().iter().all(|d| d.abs() > 1e-14 * scale)
        };
        let lu = matrix.clone().lu();
        let (lu, lu_t) = if invertible(&lu) {
            (Some(lu), Some(matrix.transpose().lu()))
        } else {
            (None, None)
        };
        Ok(Self { matrix, lu, lu_t })
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.matrix.nrows() {
            return Err(Error::ShapeMismatch {
                expected: self.matrix.nrows(),
                actual: x.len(),
            });
        }
        Ok(())
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok((&self.matrix * DVector::from_column_slice(x)).data.into())
    }

    fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok((self.matrix.tr_mul(&DVector::from_column_slice(x))).data.into())
    }
}

impl InvertibleOperator for DenseOperator {
    fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        let lu = self.lu.as_ref().ok_or(Error::Singular)?;
        let x = lu.solve(&DVector::from_column_slice(y)).ok_or(Error::Singular)?;
        Ok(x.data.into())
    }

    fn solve_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        let lu = self.lu_t.as_ref().ok_or(Error::Singular)?;
        let x = lu.solve(&DVector::from_column_slice(y)).ok_or(Error::Singular)?;
        Ok(x.data.into())
    }
}

/// `c * A` without materializing.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<'a, O> {
    pub inner: &'a O,
    pub factor: f64,
}

impl<'a, O> Scaled<'a, O> {
    pub fn new(inner: &'a O, factor: f64) -> Self {
        Self { inner, factor }
    }
}

impl<O: LinearOperator> LinearOperator for Scaled<'_, O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.inner.apply(x)?.into_iter().map(|v| v * self.factor).collect())
    }

    fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.inner.apply_transpose(x)?.into_iter().map(|v| v * self.factor).collect())
    }
}

impl<O: InvertibleOperator> InvertibleOperator for Scaled<'_, O> {
    fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        if self.factor == 0.0 {
            return Err(Error::Singular);
        }
        Ok(self.inner.solve(y)?.into_iter().map(|v| v / self.factor).collect())
    }

    fn solve_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        if self.factor == 0.0 {
            return Err(Error::Singular);
        }
        Ok(self.inner.solve_transpose(y)?.into_iter().map(|v| v / self.factor).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_solves_roundtrip() {
        let a = DenseOperator::new(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.5, 3.0])).unwrap();
        let x = [1.0, -2.0];
        let y = a.apply(&x).unwrap();
        let back = a.solve(&y).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-14 && (back[1] + 2.0).abs() < 1e-14);
        let yt = a.apply_transpose(&x).unwrap();
        let back_t = a.solve_transpose(&yt).unwrap();
        assert!((back_t[0] - 1.0).abs() < 1e-14 && (back_t[1] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn singular_dense_is_reported() {
        let a = DenseOperator::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0])).unwrap();
        assert_eq!(a.solve(&[1.0, 1.0]), Err(Error::Singular));
        assert!(DenseOperator::new(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn scaled_operator() {
        let a = DenseOperator::diagonal(&[2.0, 1.0]).unwrap();
        let s = Scaled::new(&a, 3.0);
        assert_eq!(s.apply(&[1.0, 1.0]).unwrap(), vec![6.0, 3.0]);
        assert_eq!(s.solve(&[6.0, 3.0]).unwrap(), vec![1.0, 1.0]);
    }
}
