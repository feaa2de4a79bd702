use std::f64::consts::PI;

use num_complex::Complex64;

use super::walk::WalkOperator;
use crate::error::{Error, Result};
use crate::statevector::StateVector;

pub const DEFAULT_FILTER_LENGTH: usize = 32;
pub const DEFAULT_SIDELOBE_DB: f64 = 40.0;

fn cheb_poly(order: f64, x: f64) -> f64 {
    if x > 1.0 {
        (order * x.acosh()).cosh()
    } else if x < -1.0 {
        let sign = if (order as i64) % 2 == 0 { 1.0 } else { -1.0 };
        sign * (order * (-x).acosh()).cosh()
    } else {
        (order * x.acos()).cos()
    }
}

fn window_beta(len: usize, sidelobe_db: f64) -> f64 {
    let order = (len - 1) as f64;
    ((10f64.powf(sidelobe_db.abs() / 20.0)).acosh() / order).cosh()
}

/// Dolph-Chebyshev window of `len` taps with `sidelobe_db` of sidelobe
/// suppression, normalized to unit sum.
///
/// Samples `T_{len-1}(beta cos(pi k / len))` in frequency and transforms
/// back; odd and even lengths need different phase handling to land on a
/// real symmetric window.
pub fn dolph_chebyshev_weights(len: usize, sidelobe_db: f64) -> Result<Vec<f64>> {
    if len == 0 {
        return Err(Error::InvalidArgument("filter length must be positive".into()));
    }
    if !(sidelobe_db > 0.0) || !sidelobe_db.is_finite() {
        return Err(Error::InvalidArgument(format!("sidelobe level must be positive, got {sidelobe_db}")));
    }
    if len == 1 {
        return Ok(vec![1.0]);
    }
    let order = (len - 1) as f64;
    let beta = window_beta(len, sidelobe_db);
    let nf = len as f64;
    let p: Vec<Complex64> = (0..len)
        .map(|k| {
            let v = cheb_poly(order, beta * (PI * k as f64 / nf).cos());
            if len % 2 == 1 {
                Complex64::new(v, 0.0)
            } else {
                v * Complex64::from_polar(1.0, PI * k as f64 / nf)
            }
        })
        .collect();
    let spectrum: Vec<f64> = (0..len)
        .map(|n| {
            p.iter()
                .enumerate()
                .map(|(k, pk)| pk * Complex64::from_polar(1.0, -2.0 * PI * (k * n) as f64 / nf))
                .sum::<Complex64>()
                .re
        })
        .collect();
    let w: Vec<f64> = if len % 2 == 1 {
        let half = (len + 1) / 2;
        spectrum[1..half].iter().rev().chain(&spectrum[..half]).copied().collect()
    } else {
        let half = len / 2 + 1;
        spectrum[1..half].iter().rev().chain(&spectrum[1..half]).copied().collect()
    };
    let total: f64 = w.iter().sum();
    if total.abs() < f64::MIN_POSITIVE {
        return Err(Error::ZeroWeights);
    }
    Ok(w.into_iter().map(|v| v / total).collect())
}

/// `sum_j w_j exp(i j phi)`.
pub fn window_response(weights: &[f64], phi: f64) -> Complex64 {
    weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * Complex64::from_polar(1.0, j as f64 * phi))
        .sum()
}

/// Phase at which the main lobe meets the equiripple sidelobe region,
/// `2 arccos(1 / beta)`.
pub fn main_lobe_half_width(len: usize, sidelobe_db: f64) -> f64 {
    if len < 2 {
        return PI;
    }
    2.0 * (1.0 / window_beta(len, sidelobe_db)).acos()
}

/// `sum_j w_j W^j psi` without renormalization. Weights are used as given.
pub fn apply_filter_raw(state: &StateVector, walk: &WalkOperator, weights: &[f64]) -> Result<StateVector> {
    if state.dim() != walk.dim() {
        return Err(Error::ShapeMismatch {
            expected: walk.dim(),
            actual: state.dim(),
        });
    }
    if weights.is_empty() {
        return Err(Error::ZeroWeights);
    }
    // Horner in W: r = w_{L-1} psi; r = W r + w_j psi.
    let psi = state.amplitudes();
    let last = weights[weights.len() - 1];
    let mut r: Vec<Complex64> = psi.iter().map(|a| a * last).collect();
    for &w in weights[..weights.len() - 1].iter().rev() {
        walk.apply_power(&mut r, 1);
        for (ri, pi) in r.iter_mut().zip(psi) {
            *ri += pi * w;
        }
    }
    Ok(StateVector::raw(r))
}

/// Normalized filtered state; applies `weights.len() - 1` walk steps.
pub fn chebyshev_filter(state: &StateVector, walk: &WalkOperator, weights: &[f64]) -> Result<StateVector> {
    let total: f64 = weights.iter().sum();
    if weights.is_empty() || total.abs() < f64::MIN_POSITIVE {
        return Err(Error::ZeroWeights);
    }
    let w: Vec<f64> = weights.iter().map(|v| v / total).collect();
    let mut out = apply_filter_raw(state, walk, &w)?;
    out.normalize()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    // scipy.signal.windows.chebwin, rescaled to unit sum.
    const REF_7_50: [f64; 7] = [
        0.03026703712379015,
        0.11371502876051602,
        0.22052353229125204,
        0.27098880364888367,
        0.22052353229125204,
        0.11371502876051602,
        0.03026703712379015,
    ];
    const REF_8_30: [f64; 8] = [
        0.05056386735019306,
        0.10003130281401212,
        0.15657230766899316,
        0.19283252216680166,
        0.19283252216680166,
        0.15657230766899316,
        0.10003130281401212,
        0.05056386735019306,
    ];
    const REF_32_40_HEAD: [f64; 4] = [
        0.00784615192969828,
        0.006968937099850893,
        0.00976432909917875,
        0.01302939317282375,
    ];

    #[test]
    fn matches_reference_windows() {
        for (got, want) in dolph_chebyshev_weights(7, 50.0).unwrap().iter().zip(REF_7_50) {
            assert!((got - want).abs() < 1e-13);
        }
        for (got, want) in dolph_chebyshev_weights(8, 30.0).unwrap().iter().zip(REF_8_30) {
            assert!((got - want).abs() < 1e-13);
        }
        let w = dolph_chebyshev_weights(32, 40.0).unwrap();
        assert_eq!(w.len(), 32);
        for (got, want) in w.iter().zip(REF_32_40_HEAD) {
            assert!((got - want).abs() < 1e-13);
        }
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(dolph_chebyshev_weights(2, 40.0).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn sidelobes_sit_at_design_level() {
        let w = dolph_chebyshev_weights(32, 40.0).unwrap();
        let edge = main_lobe_half_width(32, 40.0);
        assert!((edge - 0.34).abs() < 0.01, "{edge}");
        let peak = (0..2000)
            .map(|i| edge + (PI - edge) * i as f64 / 1999.0)
            .map(|phi| window_response(&w, phi).norm())
            .fold(0.0, f64::max);
        assert!((peak - 0.01).abs() < 1e-6, "{peak}");
        assert!((window_response(&w, 0.0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_weight_is_identity() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 0.6, 0.6, 0.2]);
        let walk = WalkOperator::new(&h, 1.0);
        let psi = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let out = chebyshev_filter(&psi, &walk, &[1.0]).unwrap();
        assert!((out.fidelity(&psi) - 1.0).abs() < 1e-14);
        assert_eq!(chebyshev_filter(&psi, &walk, &[0.5, -0.5]).unwrap_err(), Error::ZeroWeights);
    }

    #[test]
    fn realized_attenuation_matches_response() {
        let phases = [0.0, 0.2, 0.5, 0.9, -0.7, 2.0, 1.3, -2.5];
        let h = DMatrix::from_diagonal(&DVector::from_row_slice(&phases));
        let walk = WalkOperator::new(&h, 1.0);
        let w = dolph_chebyshev_weights(16, 40.0).unwrap();
        let psi = StateVector::from_real(&[1.0; 8]).unwrap();
        let out = apply_filter_raw(&psi, &walk, &w).unwrap();
        let cin = walk.to_eigenbasis(psi.amplitudes());
        let cout = walk.to_eigenbasis(out.amplitudes());
        for (k, lam) in walk.eigenvalues().iter().enumerate() {
            let expect = window_response(&w, *lam).norm();
            assert!((cout[k].norm() / cin[k].norm() - expect).abs() < 1e-10);
        }
    }
}
