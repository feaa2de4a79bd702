//! Spectral norms, condition numbers and the condition-number scaling study.
//!
//! Both extreme singular values come from power iteration on a normal
//! operator: `A^T A` for the largest, `A^{-1} A^{-T}` (two triangular sweeps
//! for the block system) for the smallest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::fit_loglog;
use crate::error::{Error, Result};
use crate::grid::BlockSystem;
use crate::linop::{InvertibleOperator, LinearOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSettings {
    /// Relative change of the eigenvalue estimate between iterations.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerSettings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            seed: 0x6b61_7070_61,
        }
    }
}

/// Outcome of one power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerResult {
    pub eigenvalue: f64,
    pub iterations: usize,
    /// `||B x - theta x|| / theta` at the final iterate.
    pub residual: f64,
}

fn start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = norm(&x);
    x.iter_mut().for_each(|v| *v /= n);
    x
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest eigenvalue of a symmetric positive semidefinite operator.
///
/// Stops when the Rayleigh quotient changes by less than `tol` relative.
/// Near-degenerate top pairs make the eigenvector converge far slower than
/// the eigenvalue, so the residual is reported rather than used as the test.
pub fn power_iteration<F>(dim: usize, op: F, settings: &PowerSettings) -> Result<PowerResult>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if !(settings.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {}", settings.tol)));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("empty operator".into()));
    }
    let mut x = start_vector(dim, settings.seed);
    let mut prev = f64::NAN;
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    for k in 1..=settings.max_iter {
        let y = op(&x)?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        theta = dot(&x, &y);
        let ny = norm(&y);
        if ny == 0.0 {
            return Err(Error::ZeroNorm);
        }
        residual = y.iter().zip(&x).map(|(a, b)| (a - theta * b).powi(2)).sum::<f64>().sqrt() / theta.abs();
        if k > 2 && (theta - prev).abs() <= settings.tol * theta.abs() {
            return Ok(PowerResult {
                eigenvalue: theta,
                iterations: k,
                residual,
            });
        }
        prev = theta;
        x = y.into_iter().map(|v| v / ny).collect();
    }
    Err(Error::NotConverged {
        iterations: settings.max_iter,
        estimate: theta,
        residual,
    })
}

fn sqrt_estimate(e: Error) -> Error {
    match e {
        Error::NotConverged {
            iterations,
            estimate,
            residual,
        } => Error::NotConverged {
            iterations,
            estimate: estimate.max(0.0).sqrt(),
            residual,
        },
        other => other,
    }
}

/// `sigma_max(A)` with its power-iteration diagnostics.
pub fn spectral_norm_report<O: LinearOperator + ?Sized>(a: &O, settings: &PowerSettings) -> Result<PowerResult> {
    let r = power_iteration(a.dim(), |x| a.apply_transpose(&a.apply(x)?), settings).map_err(sqrt_estimate)?;
    Ok(PowerResult {
        eigenvalue: r.eigenvalue.sqrt(),
        ..r
    })
}

pub fn spectral_norm<O: LinearOperator + ?Sized>(a: &O, settings: &PowerSettings) -> Result<f64> {
    Ok(spectral_norm_report(a, settings)?.eigenvalue)
}

/// `sigma_min(A)` by inverse iteration with exact solves.
pub fn min_singular_value_report<O: InvertibleOperator + ?Sized>(
    a: &O,
    settings: &PowerSettings,
) -> Result<PowerResult> {
    let r = power_iteration(a.dim(), |x| a.solve(&a.solve_transpose(x)?), settings).map_err(|e| match e {
        Error::NotConverged {
            iterations,
            estimate,
            residual,
        } => Error::NotConverged {
            iterations,
            estimate: 1.0 / estimate.sqrt(),
            residual,
        },
        Error::ZeroNorm => Error::Singular,
        other => other,
    })?;
    let sigma = 1.0 / r.eigenvalue.sqrt();
    if !sigma.is_finite() || sigma == 0.0 {
        return Err(Error::Singular);
    }
    Ok(PowerResult {
        eigenvalue: sigma,
        ..r
    })
}

pub fn min_singular_value<O: InvertibleOperator + ?Sized>(a: &O, settings: &PowerSettings) -> Result<f64> {
    Ok(min_singular_value_report(a, settings)?.eigenvalue)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub norm_a: f64,
    pub sigma_min: f64,
    pub kappa: f64,
    /// Iterations of both solves combined.
    pub iterations: usize,
    /// Worse of the two final residuals.
    pub residual: f64,
}

pub fn condition_number<O: InvertibleOperator + ?Sized>(a: &O, settings: &PowerSettings) -> Result<NormReport> {
    let hi = spectral_norm_report(a, settings)?;
    let lo = min_singular_value_report(a, settings)?;
    Ok(NormReport {
        norm_a: hi.eigenvalue,
        sigma_min: lo.eigenvalue,
        kappa: hi.eigenvalue / lo.eigenvalue,
        iterations: hi.iterations + lo.iterations,
        residual: hi.residual.max(lo.residual),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaSample {
    pub m: usize,
    pub norm_a: f64,
    pub sigma_min: f64,
    pub kappa: f64,
}

/// Log-log fit of `kappa` against `m`, plus the spread of `||A||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub samples: Vec<KappaSample>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub norm_min: f64,
    pub norm_max: f64,
}

impl ScalingFit {
    pub fn from_samples(samples: Vec<KappaSample>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::TooFewPoints {
                needed: 4,
                got: samples.len(),
            });
        }
        if samples.windows(2).any(|w| w[1].m <= w[0].m) {
            return Err(Error::InvalidArgument("m values must be strictly ascending".into()));
        }
        let (first, last) = (samples[0].m, samples[samples.len() - 1].m);
        if last < 8 * first {
            return Err(Error::InvalidArgument(format!(
                "m range {first}..{last} spans less than 8x"
            )));
        }
        let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.m as f64, s.kappa)).collect();
        let fit = fit_loglog(&pts)?;
        let norm_min = samples.iter().map(|s| s.norm_a).fold(f64::INFINITY, f64::min);
        let norm_max = samples.iter().map(|s| s.norm_a).fold(0.0, f64::max);
        Ok(Self {
            samples,
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            norm_min,
            norm_max,
        })
    }

    /// `max ||A|| / min ||A||` over the sweep.
    pub fn norm_spread(&self) -> f64 {
        self.norm_max / self.norm_min
    }
}

/// Builds one operator per `m` (concurrently) and fits `kappa(m)`.
pub fn kappa_scaling_study<O, F>(m_list: &[usize], builder: F, settings: &PowerSettings) -> Result<ScalingFit>
where
    O: InvertibleOperator,
    F: Fn(usize) -> Result<O> + Sync,
{
    if m_list.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: m_list.len(),
        });
    }
    let samples = m_list
        .par_iter()
        .map(|&m| {
            let op = builder(m)?;
            let r = condition_number(&op, settings)?;
            log::debug!("m = {m}: kappa = {:.6}, {} iterations", r.kappa, r.iterations);
            Ok(KappaSample {
                m,
                norm_a: r.norm_a,
                sigma_min: r.sigma_min,
                kappa: r.kappa,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ScalingFit::from_samples(samples)
}

/// The standard study: heat block systems with `N = m` at CFL number `lambda`.
pub fn heat_kappa_study(m_list: &[usize], lambda: f64, settings: &PowerSettings) -> Result<ScalingFit> {
    kappa_scaling_study(m_list, |m| BlockSystem::heat(m, m, lambda), settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{DenseOperator, Scaled};
    use nalgebra::DMatrix;

    fn settings() -> PowerSettings {
        PowerSettings::default()
    }

    #[test]
    fn identity_norms() {
        let i = DenseOperator::new(DMatrix::identity(5, 5)).unwrap();
        let r = condition_number(&i, &settings()).unwrap();
        assert!((r.norm_a - 1.0).abs() < 1e-12);
        assert!((r.sigma_min - 1.0).abs() < 1e-12);
        assert!((r.kappa - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_norms() {
        let d = DenseOperator::diagonal(&[2.0, 1.0]).unwrap();
        assert!((spectral_norm(&d, &settings()).unwrap() - 2.0).abs() < 1e-9);
        assert!((min_singular_value(&d, &settings()).unwrap() - 1.0).abs() < 1e-9);
        let d = DenseOperator::diagonal(&[4.0, 1.0]).unwrap();
        assert!((condition_number(&d, &settings()).unwrap().kappa - 4.0).abs() < 1e-8);
    }

    #[test]
    fn kappa_is_scale_invariant() {
        let sys = BlockSystem::heat(4, 4, 0.25).unwrap();
        let base = condition_number(&sys, &settings()).unwrap().kappa;
        for c in [2.0, 1.0 / 3.0] {
            let k = condition_number(&Scaled::new(&sys, c), &settings()).unwrap().kappa;
            assert!((k - base).abs() < 1e-8 * base);
        }
    }

    #[test]
    fn singular_operator_is_rejected() {
        let s = DenseOperator::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(min_singular_value(&s, &settings()), Err(Error::Singular));
    }

    #[test]
    fn non_convergence_carries_estimate() {
        let sys = BlockSystem::heat(16, 16, 0.25).unwrap();
        let tight = PowerSettings {
            max_iter: 5,
            ..settings()
        };
        match spectral_norm(&sys, &tight) {
            Err(Error::NotConverged {
                iterations, estimate, ..
            }) => {
                assert_eq!(iterations, 5);
                assert!(estimate > 1.0 && estimate < 3.0);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn synthetic_power_laws_fit_exactly() {
        let mk = |f: fn(f64) -> f64| {
            [4usize, 8, 16, 32]
                .iter()
                .map(|&m| KappaSample {
                    m,
                    norm_a: 1.0,
                    sigma_min: 1.0 / f(m as f64),
                    kappa: f(m as f64),
                })
                .collect::<Vec<_>>()
        };
        let lin = ScalingFit::from_samples(mk(|m| 3.0 * m)).unwrap();
        assert!((lin.slope - 1.0).abs() < 1e-12);
        let quad = ScalingFit::from_samples(mk(|m| 0.7 * m * m)).unwrap();
        assert!((quad.slope - 2.0).abs() < 1e-12);
        assert_eq!(quad.norm_spread(), 1.0);
    }

    #[test]
    fn fit_requires_range_and_count() {
        let s = |m| KappaSample {
            m,
            norm_a: 1.0,
            sigma_min: 1.0,
            kappa: m as f64,
        };
        assert!(ScalingFit::from_samples(vec![s(4), s(8), s(16)]).is_err());
        assert!(ScalingFit::from_samples(vec![s(4), s(5), s(6), s(7)]).is_err());
        assert!(ScalingFit::from_samples(vec![s(8), s(4), s(16), s(32)]).is_err());
    }
}
