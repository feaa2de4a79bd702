use std::fmt;
use std::str::FromStr;

use super::rescale::rescale_to_unit;
use crate::error::{Error, Result};
use crate::qae::{build_mean_oracle, qae_worst_case_bound, Readout};

/// How the sample mean over a secondary subinterval is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanEstimator {
    /// Classical average of the samples.
    ExactMean,
    /// Amplitude estimation with `ancillas` phase qubits on the rescaled samples.
    Qae { ancillas: u32, readout: Readout },
}

/// One mean estimate in the units of the samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    /// Worst-case additive error (zero for the exact mean).
    pub bound: f64,
    /// Oracle queries, or samples read for the exact mean.
    pub queries: u64,
}

impl MeanEstimator {
    pub fn qae(ancillas: u32) -> Self {
        MeanEstimator::Qae {
            ancillas,
            readout: Readout::Argmax,
        }
    }

    /// Variant for the `task`-th estimate of a run: seeded sampling gets a
    /// distinct, reproducible seed per task.
    pub fn for_task(&self, task: u64) -> Self {
        match *self {
            MeanEstimator::Qae {
                ancillas,
                readout: Readout::Sample(seed),
            } => MeanEstimator::Qae {
                ancillas,
                readout: Readout::Sample(seed.wrapping_add(task.wrapping_mul(0x9e37_79b9_7f4a_7c15))),
            },
            other => other,
        }
    }

    pub fn estimate(&self, samples: &[f64]) -> Result<MeanEstimate> {
        if samples.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        match *self {
            MeanEstimator::ExactMean => Ok(MeanEstimate {
                mean: samples.iter().sum::<f64>() / samples.len() as f64,
                bound: 0.0,
                queries: samples.len() as u64,
            }),
            MeanEstimator::Qae { ancillas, readout } => {
                let (g, map) = rescale_to_unit(samples)?;
                let oracle = build_mean_oracle(&g)?;
                let r = oracle.estimate(ancillas, readout)?;
                Ok(MeanEstimate {
                    mean: map.from_unit(r.estimate),
                    bound: map.scale * oracle.pad_factor() * qae_worst_case_bound(ancillas),
                    queries: r.queries,
                })
            }
        }
    }
}

impl fmt::Display for MeanEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanEstimator::ExactMean => f.write_str("exact"),
            MeanEstimator::Qae { ancillas, .. } => write!(f, "qae:{ancillas}"),
        }
    }
}

/// `exact`, `qae` (10 ancillas) or `qae:M`.
impl FromStr for MeanEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "exact" => Ok(MeanEstimator::ExactMean),
            None if s == "qae" => Ok(MeanEstimator::qae(10)),
            Some(("qae", m)) => m
                .parse()
                .map(MeanEstimator::qae)
                .map_err(|_| Error::Config(format!("bad ancilla count '{m}'"))),
            _ => Err(Error::Config(format!("unknown estimator '{s}'"))),
        }
    }
}
