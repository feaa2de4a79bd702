use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// State preparation unitary `A` together with its inverse, acting in place
/// on a dense amplitude vector. The prepared state is `A |initial_index>`.
pub trait Preparation: Sync {
    fn dim(&self) -> usize;
    fn initial_index(&self) -> usize;
    fn apply(&self, amps: &mut [Complex64]);
    fn apply_inverse(&self, amps: &mut [Complex64]);
}

/// `A |initial>` as a state.
pub fn prepare_state<P: Preparation + ?Sized>(prep: &P) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); prep.dim()];
    amps[prep.initial_index()] = Complex64::new(1.0, 0.0);
    prep.apply(&mut amps);
    StateVector::raw(amps)
}

/// Orthogonal projector onto the "good" subspace.
#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    /// Diagonal: keeps the flagged basis states.
    Mask(Vec<bool>),
    /// `|phi><phi|` for a unit vector `phi`.
    Rank1(Vec<Complex64>),
}

impl Projector {
    pub fn dim(&self) -> usize {
        match self {
            Projector::Mask(m) => m.len(),
            Projector::Rank1(v) => v.len(),
        }
    }

    /// `P v`.
    pub fn project(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Projector::Mask(mask) => v
                .iter()
                .zip(mask)
                .map(|(a, &keep)| if keep { *a } else { Complex64::new(0.0, 0.0) })
                .collect(),
            Projector::Rank1(phi) => {
                let c: Complex64 = phi.iter().zip(v).map(|(p, a)| p.conj() * a).sum();
                phi.iter().map(|p| p * c).collect()
            }
        }
    }

    /// `<v|P|v>`.
    pub fn mass(&self, v: &[Complex64]) -> f64 {
        match self {
            Projector::Mask(mask) => v.iter().zip(mask).filter(|(_, &k)| k).map(|(a, _)| a.norm_sqr()).sum(),
            Projector::Rank1(phi) => phi.iter().zip(v).map(|(p, a)| p.conj() * a).sum::<Complex64>().norm_sqr(),
        }
    }

    /// `v <- (I - 2P) v`.
    pub fn reflect(&self, v: &mut [Complex64]) {
        match self {
            Projector::Mask(mask) => {
                for (a, &k) in v.iter_mut().zip(mask) {
                    if k {
                        *a = -*a;
                    }
                }
            }
            Projector::Rank1(phi) => {
                let c: Complex64 = phi.iter().zip(v.iter()).map(|(p, a)| p.conj() * a).sum();
                for (a, p) in v.iter_mut().zip(phi) {
                    *a -= p * c * 2.0;
                }
            }
        }
    }
}

/// Mean-estimation oracle over samples `g(i)` in `[0, 1]`.
///
/// Register layout: basis index `2 i + flag`. On each `|i>` the oracle is
/// the real involution
/// `|i>|1> -> sqrt(g)|i>|1> + sqrt(1-g)|i>|0>`,
/// `|i>|0> -> sqrt(1-g)|i>|1> - sqrt(g)|i>|0>`.
/// The preparation is `A = O (F_N (x) I)` started from `|0>|1>`, so the
/// flag-1 mass of `A|0>|1>` is the (padded) mean of `g`.
#[derive(Clone)]
pub struct MeanOracle {
    g: Vec<f64>,
    len: usize,
    root_g: Vec<f64>,
    root_h: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for MeanOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeanOracle")
            .field("len", &self.len)
            .field("padded_len", &self.g.len())
            .finish()
    }
}

pub fn build_mean_oracle(g: &[f64]) -> Result<MeanOracle> {
    if g.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    if let Some((index, &value)) = g.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && **v <= 1.0)) {
        return Err(Error::OutOfUnitRange { index, value });
    }
    let len = g.len();
    let n = len.next_power_of_two();
    let mut padded = g.to_vec();
    padded.resize(n, 0.0);
    let mut planner = FftPlanner::new();
    Ok(MeanOracle {
        root_g: padded.iter().map(|v| v.sqrt()).collect(),
        root_h: padded.iter().map(|v| (1.0 - v).sqrt()).collect(),
        g: padded,
        len,
        fft: planner.plan_fft_forward(n),
        ifft: planner.plan_fft_inverse(n),
    })
}

impl MeanOracle {
    /// Number of samples supplied.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Power-of-two sample count after zero padding.
    pub fn padded_len(&self) -> usize {
        self.g.len()
    }

    pub fn num_qubits(&self) -> u32 {
        self.padded_len().trailing_zeros() + 1
    }

    /// Mean over the supplied samples.
    pub fn mean(&self) -> f64 {
        self.g.iter().sum::<f64>() / self.len as f64
    }

    /// `padded_len / len`: converts a padded-register mean to the true mean.
    pub fn pad_factor(&self) -> f64 {
        self.padded_len() as f64 / self.len as f64
    }

    /// Flag-1 projector.
    pub fn flag_projector(&self) -> Projector {
        Projector::Mask((0..2 * self.padded_len()).map(|k| k % 2 == 1).collect())
    }

    /// Applies `O` (its own inverse).
    pub fn apply_oracle(&self, amps: &mut [Complex64]) {
        for (i, pair) in amps.chunks_exact_mut(2).enumerate() {
            let (zero, one) = (pair[0], pair[1]);
            let (s, c) = (self.root_g[i], self.root_h[i]);
            pair[1] = one * s + zero * c;
            pair[0] = one * c - zero * s;
        }
    }

    /// Unitary QFT on the sample index of both flag branches.
    fn qft(&self, amps: &mut [Complex64], inverse: bool) {
        let n = self.padded_len();
        let scale = 1.0 / (n as f64).sqrt();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for flag in 0..2 {
            for i in 0..n {
                buf[i] = amps[2 * i + flag];
            }
            if inverse {
                self.fft.process(&mut buf);
            } else {
                self.ifft.process(&mut buf);
            }
            for i in 0..n {
                amps[2 * i + flag] = buf[i] * scale;
            }
        }
    }
}

impl Preparation for MeanOracle {
    fn dim(&self) -> usize {
        2 * self.padded_len()
    }

    fn initial_index(&self) -> usize {
        1
    }

    fn apply(&self, amps: &mut [Complex64]) {
        self.qft(amps, false);
        self.apply_oracle(amps);
    }

    fn apply_inverse(&self, amps: &mut [Complex64]) {
        self.apply_oracle(amps);
        self.qft(amps, true);
    }
}
