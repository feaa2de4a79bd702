use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(epsilon))
    }
}

/// `m ln(1/eps) / eps`: linear-system solve plus mean-estimation read-out.
pub fn cost_cas_readout(m: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(m * (1.0 / epsilon).ln() / epsilon)
}

/// `(1/eps)^(1/(q + 1 - gamma))`.
pub fn cost_osk(epsilon: f64, q: f64, gamma: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let denom = q + 1.0 - gamma;
    if !(denom > 0.0) {
        return Err(Error::InvalidArgument(format!("q + 1 - gamma must be positive, got {denom}")));
    }
    Ok((1.0 / epsilon).powf(1.0 / denom))
}

/// `eps^(-1/2)`.
pub fn cost_fft(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(epsilon.powf(-0.5))
}

/// `m^(2/d) ln(1/eps) / eps`, taking `kappa ~ m^(2/d)` in `d` dimensions.
pub fn cost_cas_highdim(m: f64, d: u32, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(m.powf(2.0 / d as f64) * (1.0 / epsilon).ln() / epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    CasReadout,
    Osk,
    FftClassical,
    CasHighdim,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::CasReadout,
        ModelKind::Osk,
        ModelKind::FftClassical,
        ModelKind::CasHighdim,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::CasReadout => "cas_readout",
            ModelKind::Osk => "osk",
            ModelKind::FftClassical => "fft_classical",
            ModelKind::CasHighdim => "cas_highdim",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown cost model '{s}'")))
    }
}

/// One of the four cost formulas with its parameters and a unit constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub kind: ModelKind,
    pub m: f64,
    pub d: u32,
    pub q: f64,
    pub gamma: f64,
    pub c: f64,
}

impl CostModel {
    pub fn new(kind: ModelKind, m: f64) -> Self {
        Self {
            kind,
            m,
            d: 1,
            q: 1.0,
            gamma: 1.0,
            c: 1.0,
        }
    }

    pub fn with_dimension(self, d: u32) -> Self {
        Self { d, ..self }
    }

    pub fn with_smoothness(self, q: f64, gamma: f64) -> Self {
        Self { q, gamma, ..self }
    }

    pub fn cost(&self, epsilon: f64) -> Result<f64> {
        let raw = match self.kind {
            ModelKind::CasReadout => cost_cas_readout(self.m, epsilon)?,
            ModelKind::Osk => cost_osk(epsilon, self.q, self.gamma)?,
            ModelKind::FftClassical => cost_fft(epsilon)?,
            ModelKind::CasHighdim => cost_cas_highdim(self.m, self.d, epsilon)?,
        };
        Ok(self.c * raw)
    }

    /// Power of `1/eps` the model grows with, log factors excluded.
    pub fn predicted_exponent(&self) -> f64 {
        match self.kind {
            ModelKind::CasReadout | ModelKind::CasHighdim => 1.0,
            ModelKind::Osk => 1.0 / (self.q + 1.0 - self.gamma),
            ModelKind::FftClassical => 0.5,
        }
    }

    /// Whether the formula carries an explicit `ln(1/eps)` factor.
    pub fn has_log_factor(&self) -> bool {
        matches!(self.kind, ModelKind::CasReadout | ModelKind::CasHighdim)
    }
}
