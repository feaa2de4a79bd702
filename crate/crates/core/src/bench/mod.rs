//! Cost models, sweep orchestration, log-log fitting and the comparison report.

mod cost;
mod fit;
mod report;
mod sweep;

pub use cost::{cost_cas_highdim, cost_cas_readout, cost_fft, cost_osk, CostModel, ModelKind};
pub use fit::{fit_loglog, LogLogFit};
pub use report::{ExponentRow, Report, EXPONENT_TOLERANCE};
pub use sweep::{log_grid, model_records, read_records, run_sweep, write_records, CostRecord, SweepConfig, SweepMethod};
