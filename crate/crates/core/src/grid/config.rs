use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Boundary, Grid1D, HeatProblem, InitialProfile, DEFAULT_LAMBDA};
use crate::error::{Error, Result};

/// TOML problem description.
///
/// ```toml
/// m = 16
/// alpha = 1.0
/// t_final = 0.01
/// lambda = 0.25          # or n_steps = 40
/// initial = "sine:1"     # spike | uniform | sine:p
/// # samples = [...]      # custom initial data, overrides `initial`
/// boundary = [0.0, 0.0]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default)]
    pub x0: f64,
    #[serde(default = "one")]
    pub x_end: f64,
    pub m: usize,
    #[serde(default = "one")]
    pub alpha: f64,
    pub t_final: f64,
    #[serde(default)]
    pub n_steps: Option<usize>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default = "default_initial")]
    pub initial: String,
    #[serde(default)]
    pub samples: Option<Vec<f64>>,
    #[serde(default)]
    pub boundary: [f64; 2],
    #[serde(default = "yes")]
    pub normalize: bool,
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn default_initial() -> String {
    "spike".into()
}

impl ProblemConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn grid(&self) -> Result<Grid1D> {
        match (self.n_steps, self.lambda) {
            (Some(_), Some(_)) => Err(Error::Config("give n_steps or lambda, not both".into())),
            (Some(n), None) => Grid1D::new(self.x0, self.x_end, self.m, self.t_final, n),
            (None, l) => Grid1D::with_lambda(
                self.x0,
                self.x_end,
                self.m,
                self.t_final,
                self.alpha,
                l.unwrap_or(DEFAULT_LAMBDA),
            ),
        }
    }

    pub fn profile(&self) -> Result<InitialProfile> {
        match &self.samples {
            Some(s) => Ok(InitialProfile::Samples(s.clone())),
            None => self.initial.parse(),
        }
    }

    pub fn build(&self) -> Result<HeatProblem> {
        let grid = self.grid()?;
        let u0 = self.profile()?.sample(&grid)?;
        let boundary = Boundary::new(self.boundary[0], self.boundary[1]);
        if self.normalize {
            HeatProblem::new(grid, self.alpha, u0, boundary)
        } else {
            HeatProblem::unnormalized(grid, self.alpha, u0, boundary)
        }
    }
}
