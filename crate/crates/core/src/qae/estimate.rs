use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use super::oracle::{prepare_state, Preparation, Projector};
use crate::error::{Error, Result};

pub const MAX_ANCILLAS: u32 = 16;

/// Constant in `M = ceil(log2(c / eps))` for bounded mean estimation.
pub const MEAN_ESTIMATION_CONSTANT: f64 = 4.0 * PI;

/// How the phase register is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readout {
    /// Most likely outcome of the exact distribution (deterministic).
    Argmax,
    /// One seeded sample of the exact distribution.
    Sample(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    /// Estimated good-subspace mass of the prepared state, in `[0, 1]`.
    pub amplitude: f64,
    /// `amplitude` rescaled to the quantity of interest (e.g. un-padded mean).
    pub estimate: f64,
    pub ancillas: u32,
    /// Phase-register outcome.
    pub outcome: usize,
    /// Probability of that outcome.
    pub outcome_probability: f64,
    /// Standard QAE bound evaluated at the estimate, in the units of `estimate`.
    pub bound: f64,
    /// Grover iterates applied: `2^M - 1`.
    pub grover_applications: u64,
    /// Oracle queries: Grover iterates plus the initial preparation, `2^M`.
    pub queries: u64,
    pub seed: Option<u64>,
}

/// `2 pi sqrt(a (1 - a)) / 2^M + pi^2 / 4^M`.
pub fn qae_error_bound(a: f64, ancillas: u32) -> f64 {
    let t = (1u64 << ancillas) as f64;
    2.0 * PI * (a * (1.0 - a)).max(0.0).sqrt() / t + PI * PI / (t * t)
}

/// The bound maximized over `a`: `pi / 2^M + pi^2 / 4^M`.
pub fn qae_worst_case_bound(ancillas: u32) -> f64 {
    qae_error_bound(0.5, ancillas)
}

/// Ancilla count `ceil(log2(c / eps))` (at least 1).
pub fn ancillas_for_epsilon(epsilon: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let m = (MEAN_ESTIMATION_CONSTANT / epsilon).log2().ceil().max(1.0) as u32;
    if m > MAX_ANCILLAS {
        return Err(Error::AncillaCount(m));
    }
    Ok(m)
}

/// Exact outcome distribution of canonical phase estimation on the Grover
/// iterate `Q = -A S_0 A^dag S_good`.
///
/// The prepared state and every `Q^y psi` stay in the plane spanned by its
/// good and bad components, so the phase register after the inverse QFT
/// has `p(k) = (|FFT(alpha)_k|^2 + |FFT(beta)_k|^2) / 4^M` where
/// `alpha_y, beta_y` are the plane coordinates of `Q^y psi`.
pub fn phase_distribution<P: Preparation + ?Sized>(prep: &P, good: &Projector, ancillas: u32) -> Result<Vec<f64>> {
    if ancillas == 0 || ancillas > MAX_ANCILLAS {
        return Err(Error::AncillaCount(ancillas));
    }
    if good.dim() != prep.dim() {
        return Err(Error::ShapeMismatch {
            expected: prep.dim(),
            actual: good.dim(),
        });
    }
    let psi = prepare_state(prep).amplitudes().to_vec();
    let good_part = good.project(&psi);
    let bad_part: Vec<Complex64> = psi.iter().zip(&good_part).map(|(p, g)| p - g).collect();
    let unit = |v: Vec<Complex64>| {
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        (n > 1e-300).then(|| v.into_iter().map(|a| a / n).collect::<Vec<_>>())
    };
    let g_axis = unit(good_part);
    let b_axis = unit(bad_part);
    let coord = |axis: &Option<Vec<Complex64>>, v: &[Complex64]| -> Complex64 {
        axis.as_ref()
            .map(|u| u.iter().zip(v).map(|(x, y)| x.conj() * y).sum())
            .unwrap_or_default()
    };

    let t = 1usize << ancillas;
    let mut alpha = Vec::with_capacity(t);
    let mut beta = Vec::with_capacity(t);
    let mut phi = psi;
    let init = prep.initial_index();
    for y in 0..t {
        alpha.push(coord(&g_axis, &phi));
        beta.push(coord(&b_axis, &phi));
        if y + 1 < t {
            // S_0 = I - 2|init><init|, S_good = I - 2P.
            good.reflect(&mut phi);
            prep.apply_inverse(&mut phi);
            phi[init] = -phi[init];
            prep.apply(&mut phi);
            phi.iter_mut().for_each(|a| *a = -*a);
        }
    }

    let fft = FftPlanner::new().plan_fft_forward(t);
    fft.process(&mut alpha);
    fft.process(&mut beta);
    let norm = (t * t) as f64;
    Ok(alpha
        .iter()
        .zip(&beta)
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()) / norm)
        .collect())
}

/// Canonical QAE: `a_hat = sin^2(pi k / 2^M)` for the read phase `k`.
pub fn amplitude_estimate<P: Preparation + ?Sized>(
    prep: &P,
    good: &Projector,
    ancillas: u32,
    readout: Readout,
) -> Result<EstimationResult> {
    let p = phase_distribution(prep, good, ancillas)?;
    let (outcome, seed) = match readout {
        Readout::Argmax => {
            // First maximum keeps ties deterministic.
            let mut best = 0;
            for (k, v) in p.iter().enumerate() {
                if *v > p[best] * (1.0 + 1e-12) {
                    best = k;
                }
            }
            (best, None)
        }
        Readout::Sample(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dist = WeightedIndex::new(&p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            (dist.sample(&mut rng), Some(seed))
        }
    };
    let t = 1u64 << ancillas;
    let a_hat = (PI * outcome as f64 / t as f64).sin().powi(2);
    // Snap the exact endpoints that sin^2 only reaches up to rounding.
    let a_hat = if a_hat < 1e-15 {
        0.0
    } else if a_hat > 1.0 - 1e-15 {
        1.0
    } else {
        a_hat
    };
    Ok(EstimationResult {
        amplitude: a_hat,
        estimate: a_hat,
        ancillas,
        outcome,
        outcome_probability: p[outcome],
        bound: qae_error_bound(a_hat, ancillas),
        grover_applications: t - 1,
        queries: t,
        seed,
    })
}

/// Bounded-output mean estimation at additive error `epsilon`.
pub fn mean_estimate_bounded<P: Preparation + ?Sized>(
    prep: &P,
    good: &Projector,
    epsilon: f64,
    readout: Readout,
) -> Result<EstimationResult> {
    let m = ancillas_for_epsilon(epsilon)?;
    amplitude_estimate(prep, good, m, readout)
}
