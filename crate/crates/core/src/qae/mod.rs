//! Amplitude estimation on a dense statevector.
//!
//! A preparation `A` and a good-subspace projector define the Grover
//! iterate; canonical phase estimation over it is simulated exactly and
//! read out as `sin^2(pi k / 2^M)`. Two preparations ship with the crate:
//! the sample-mean oracle and exact injection of a classical vector (used to
//! read out region heat).

mod estimate;
mod oracle;
mod readout;

pub use estimate::{
    amplitude_estimate, ancillas_for_epsilon, mean_estimate_bounded, phase_distribution, qae_error_bound,
    qae_worst_case_bound, EstimationResult, Readout, MAX_ANCILLAS, MEAN_ESTIMATION_CONSTANT,
};
pub use oracle::{build_mean_oracle, prepare_state, MeanOracle, Preparation, Projector};
pub use readout::{
    heat_readout, region_mask, region_uniform_projector, HeatReadout, InjectedState, ReadoutNorms,
};

use crate::error::Result;

impl MeanOracle {
    /// QAE of the sample mean; `estimate` and `bound` are corrected for padding.
    pub fn estimate(&self, ancillas: u32, readout: Readout) -> Result<EstimationResult> {
        let mut r = amplitude_estimate(self, &self.flag_projector(), ancillas, readout)?;
        r.estimate = r.amplitude * self.pad_factor();
        r.bound *= self.pad_factor();
        Ok(r)
    }

    /// Mean estimate at additive error `epsilon` on the padded register.
    pub fn estimate_bounded(&self, epsilon: f64, readout: Readout) -> Result<EstimationResult> {
        self.estimate(ancillas_for_epsilon(epsilon)?, readout)
    }
}
