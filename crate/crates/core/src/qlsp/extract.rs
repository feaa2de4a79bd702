use nalgebra::DVector;
use num_complex::Complex64;

use super::path::HamiltonianPath;
use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Post-selection threshold on the system-register mass.
pub const MIN_SUCCESS_MASS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    /// Unit-norm real solution direction on the logical indices.
    pub direction: Vec<f64>,
    /// `direction / beta`: the solution estimate in the units of `A x = b`.
    pub values: Vec<f64>,
    /// Least-squares scale with `A direction ~ beta b`.
    pub beta: f64,
    /// `||A direction - beta b||`.
    pub residual: f64,
    /// `|<x|x_hat>|^2` against the exact normalized solution.
    pub fidelity: f64,
    /// Probability of the system register (the post-selection success rate).
    pub success_mass: f64,
}

/// Post-selects the system register, fixes the global phase and rescales the
/// direction against the right-hand side.
pub fn extract_solution(state: &StateVector, path: &HamiltonianPath) -> Result<Extraction> {
    if state.dim() != path.dim() {
        return Err(Error::ShapeMismatch {
            expected: path.dim(),
            actual: state.dim(),
        });
    }
    let d = path.register_dim();
    let n = path.logical_dim();
    let top = &state.amplitudes()[..d];
    let success_mass: f64 = top.iter().map(|a| a.norm_sqr()).sum();
    if success_mass < MIN_SUCCESS_MASS {
        return Err(Error::PostSelection(success_mass));
    }

    let pivot = top[..n]
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { Complex64::new(1.0, 0.0) };
    let mut direction: Vec<f64> = top[..n].iter().map(|a| (a * phase).re).collect();
    let dn = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(dn > 0.0) {
        return Err(Error::PostSelection(0.0));
    }
    direction.iter_mut().for_each(|v| *v /= dn);

    let a = path.source();
    let b = DVector::from_column_slice(path.rhs());
    let ax = a * DVector::from_column_slice(&direction);
    let beta = ax.dot(&b) / b.dot(&b);
    let residual = (&ax - &b * beta).norm();
    let values = direction.iter().map(|v| v / beta).collect();

    let exact = a.clone().lu().solve(&b).ok_or(Error::Singular)?;
    let exact = &exact / exact.norm();
    let top_norm = success_mass.sqrt();
    let overlap: Complex64 = top[..n]
        .iter()
        .zip(exact.iter())
        .map(|(t, x)| t * *x)
        .sum::<Complex64>()
        / top_norm;
    Ok(Extraction {
        direction,
        values,
        beta,
        residual,
        fidelity: overlap.norm_sqr(),
        success_mass,
    })
}
