use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest dilated (walk) dimension the dense emulation accepts.
pub const MAX_DILATED_DIM: usize = 4096;

/// Unitary dilation of a matrix rescaled to unit spectral norm.
///
/// The source is padded to a power of two with `||A|| * I`, so after
/// rescaling the padding block is exactly the identity.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    logical_dim: usize,
    normalization: f64,
    normalized: DMatrix<f64>,
    unitary: DMatrix<f64>,
}

/// `[[A, D_*], [D, -A^T]]` with defect operators `D_* = U sqrt(1 - S^2) U^T`
/// and `D = V sqrt(1 - S^2) V^T` from the SVD `A = U S V^T`.
pub fn block_encode(a: &DMatrix<f64>) -> Result<BlockEncoding> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: a.nrows(),
            actual: a.ncols(),
        });
    }
    let n = a.nrows();
    let d = n.next_power_of_two();
    if 2 * d > MAX_DILATED_DIM {
        return Err(Error::TooLarge(2 * d));
    }
    let norm = a.clone().singular_values().max();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let mut abar = DMatrix::identity(d, d);
    abar.view_mut((0, 0), (n, n)).copy_from(&(a / norm));

    let svd = abar.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let defect = DMatrix::from_diagonal(&svd.singular_values.map(|s| (1.0 - (s * s).min(1.0)).sqrt()));
    let d_left = &u * &defect * u.transpose();
    let d_right = vt.transpose() * &defect * &vt;

    let mut unitary = DMatrix::zeros(2 * d, 2 * d);
    unitary.view_mut((0, 0), (d, d)).copy_from(&abar);
    unitary.view_mut((0, d), (d, d)).copy_from(&d_left);
    unitary.view_mut((d, 0), (d, d)).copy_from(&d_right);
    unitary.view_mut((d, d), (d, d)).copy_from(&(-abar.transpose()));
    Ok(BlockEncoding {
        logical_dim: n,
        normalization: norm,
        normalized: abar,
        unitary,
    })
}

impl BlockEncoding {
    /// Size of the matrix before padding.
    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }

    /// Padded (power-of-two) size of the encoded block.
    pub fn padded_dim(&self) -> usize {
        self.normalized.nrows()
    }

    /// `||A||`; the encoded block is `A / normalization`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn ancillas(&self) -> u32 {
        1
    }

    /// Padded, rescaled source `A / ||A|| (+) I`.
    pub fn normalized(&self) -> &DMatrix<f64> {
        &self.normalized
    }

    pub fn unitary(&self) -> &DMatrix<f64> {
        &self.unitary
    }

    /// Top-left `n x n` corner of the unitary.
    pub fn corner(&self) -> DMatrix<f64> {
        self.unitary.view((0, 0), (self.logical_dim, self.logical_dim)).into_owned()
    }

    /// `max |U^T U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.unitary.nrows();
        (self.unitary.tr_mul(&self.unitary) - DMatrix::<f64>::identity(d, d)).amax()
    }
}
