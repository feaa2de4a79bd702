use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex amplitude array of power-of-two length.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Zero-pads to the next power of two and normalizes.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_amplitudes(mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidArgument("empty state".into()));
        }
        amps.resize(amps.len().next_power_of_two(), Complex64::new(0.0, 0.0));
        let mut s = Self { amps };
        s.normalize()?;
        Ok(s)
    }

    /// Computational basis state `|index>` in dimension `dim` (a power of two).
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if !dim.is_power_of_two() || index >= dim {
            return Err(Error::InvalidArgument(format!("basis state {index} of dimension {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Wraps amplitudes without normalizing; used for intermediate,
    /// non-unitary results.
    pub(crate) fn raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_qubits(&self) -> u32 {
        self.amps.len().trailing_zeros()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(n)
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// Total probability on the given indices.
    pub fn mass<I: IntoIterator<Item = usize>>(&self, indices: I) -> f64 {
        indices.into_iter().map(|i| self.amps[i].norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2` for normalized states.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pads_and_normalizes() {
        let s = StateVector::from_real(&[3.0, 0.0, 4.0]).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.num_qubits(), 2);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((s.probability(2) - 0.64).abs() < 1e-15);
        assert!(StateVector::from_real(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn fidelity_of_basis_states() {
        let a = StateVector::basis(4, 1).unwrap();
        let b = StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((a.fidelity(&b) - 0.5).abs() < 1e-15);
        assert!(StateVector::basis(3, 0).is_err());
    }
}
