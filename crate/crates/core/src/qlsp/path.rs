use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::encoding::{block_encode, BlockEncoding};
use crate::error::{Error, Result};
use crate::grid::BlockSystem;
use crate::statevector::StateVector;

/// Eigenvalues with modulus below this count as the null space.
pub const NULL_THRESHOLD: f64 = 1e-9;

/// Linear interpolation `H(s) = (1 - s) H0 + s H1` on the doubled space.
///
/// With `A(s) = (1 - s) I + s Abar` and `Q = I - |b><b|`,
/// `H(s) = [[0, A(s)^T Q], [Q A(s), 0]]`. Its null space contains
/// `[A(s)^{-1} b; 0]`, which moves from `[b; 0]` to the normalized solution,
/// and the fixed vector `[0; b]`, which the evolution never touches.
#[derive(Debug, Clone)]
pub struct HamiltonianPath {
    encoding: BlockEncoding,
    source: DMatrix<f64>,
    rhs: Vec<f64>,
    b_bar: DVector<f64>,
    h0: DMatrix<f64>,
    h1: DMatrix<f64>,
}

pub fn build_hamiltonian_path(a: &DMatrix<f64>, b: &[f64]) -> Result<HamiltonianPath> {
    if b.len() != a.nrows() {
        return Err(Error::ShapeMismatch {
            expected: a.nrows(),
            actual: b.len(),
        });
    }
    let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(bn > 0.0) {
        return Err(Error::ZeroRhs);
    }
    let encoding = block_encode(a)?;
    let d = encoding.padded_dim();
    let mut b_bar = DVector::zeros(d);
    for (i, v) in b.iter().enumerate() {
        b_bar[i] = v / bn;
    }
    let q = DMatrix::identity(d, d) - &b_bar * b_bar.transpose();
    let h0 = dilate(&q);
    let h1 = dilate(&(&q * encoding.normalized()));
    Ok(HamiltonianPath {
        encoding,
        source: a.clone(),
        rhs: b.to_vec(),
        b_bar,
        h0,
        h1,
    })
}

/// `[[0, B^T], [B, 0]]`.
fn dilate(lower: &DMatrix<f64>) -> DMatrix<f64> {
    let d = lower.nrows();
    let mut h = DMatrix::zeros(2 * d, 2 * d);
    h.view_mut((0, d), (d, d)).copy_from(&lower.transpose());
    h.view_mut((d, 0), (d, d)).copy_from(lower);
    h
}

impl HamiltonianPath {
    pub fn from_block_system(system: &BlockSystem) -> Result<Self> {
        build_hamiltonian_path(&system.to_dense(), system.rhs())
    }

    pub fn encoding(&self) -> &BlockEncoding {
        &self.encoding
    }

    /// The matrix as given (unpadded, unscaled).
    pub fn source(&self) -> &DMatrix<f64> {
        &self.source
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn logical_dim(&self) -> usize {
        self.encoding.logical_dim()
    }

    /// Dimension of the system register (padded).
    pub fn register_dim(&self) -> usize {
        self.encoding.padded_dim()
    }

    /// Dimension of `H(s)`.
    pub fn dim(&self) -> usize {
        2 * self.register_dim()
    }

    pub fn h0(&self) -> &DMatrix<f64> {
        &self.h0
    }

    pub fn h1(&self) -> &DMatrix<f64> {
        &self.h1
    }

    pub fn at(&self, s: f64) -> DMatrix<f64> {
        &self.h0 * (1.0 - s) + &self.h1 * s
    }

    /// `A(s) = (1 - s) I + s Abar`.
    pub fn interpolated_source(&self, s: f64) -> DMatrix<f64> {
        let d = self.register_dim();
        DMatrix::identity(d, d) * (1.0 - s) + self.encoding.normalized() * s
    }

    /// `||dH/ds|| = ||H1 - H0||`, exact for the linear path.
    pub fn derivative_norm(&self) -> f64 {
        spectral_radius(&(&self.h1 - &self.h0))
    }

    /// `[b; 0]`.
    pub fn initial_state(&self) -> StateVector {
        self.embed(self.b_bar.as_slice())
    }

    /// `[A(s)^{-1} b / ||.||; 0]`, the null vector the evolution follows.
    pub fn instantaneous_state(&self, s: f64) -> Result<StateVector> {
        let x = self
            .interpolated_source(s)
            .lu()
            .solve(&self.b_bar)
            .ok_or(Error::Singular)?;
        Ok(self.embed(x.as_slice()))
    }

    /// Target state: normalized `A^{-1} b` in the top register.
    pub fn solution_state(&self) -> Result<StateVector> {
        self.instantaneous_state(1.0)
    }

    /// Places a system-register vector in the top half and normalizes.
    pub fn embed(&self, top: &[f64]) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (a, v) in amps.iter_mut().zip(top) {
            *a = Complex64::new(*v, 0.0);
        }
        let mut s = StateVector::raw(amps);
        s.normalize().expect("embedded vector is nonzero");
        s
    }

    /// Smallest nonzero `|eigenvalue|` of `H(s)`.
    pub fn spectral_gap(&self, s: f64) -> f64 {
        spectral_gap_of_matrix(&self.at(s))
    }

    /// `(s, gap)` of the smallest gap over `points` equally spaced values of s.
    pub fn min_gap(&self, points: usize) -> (f64, f64) {
        let points = points.max(2);
        (0..points)
            .map(|i| {
                let s = i as f64 / (points - 1) as f64;
                (s, self.spectral_gap(s))
            })
            .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }

    /// `max |H(s) v|` for a state `v`; zero when `v` is a null vector.
    pub fn annihilation_residual(&self, s: f64, v: &StateVector) -> f64 {
        let h = self.at(s);
        let re = DVector::from_iterator(v.dim(), v.amplitudes().iter().map(|a| a.re));
        let im = DVector::from_iterator(v.dim(), v.amplitudes().iter().map(|a| a.im));
        (&h * re).amax().max((&h * im).amax())
    }
}

fn spectral_radius(h: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(h.clone()).eigenvalues.amax()
}

/// Smallest `|eigenvalue|` above the null threshold of a symmetric matrix
/// (infinite if every eigenvalue is null).
pub fn spectral_gap_of_matrix(h: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .map(|e| e.abs())
        .filter(|e| *e > NULL_THRESHOLD)
        .fold(f64::INFINITY, f64::min)
}

pub fn spectral_gap(path: &HamiltonianPath, s: f64) -> f64 {
    path.spectral_gap(s)
}
