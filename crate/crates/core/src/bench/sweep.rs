use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cost::{CostModel, ModelKind};
use crate::conditioning::{condition_number, PowerSettings};
use crate::error::{Error, Result};
use crate::grid::{
    assemble_block_system, heat_in_region, march_explicit, march_spectral, solve_block_direct, Boundary, Grid1D,
    HeatProblem, InitialProfile, Region, DEFAULT_LAMBDA,
};
use crate::osk::{build_hierarchy, osk_solve, MeanEstimator, SmoothnessParams};
use crate::qae::{ancillas_for_epsilon, heat_readout, InjectedState, Readout};
use crate::qlsp::{solve_block_system_quantum, WalkSchedule, MAX_DILATED_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    /// Explicit marching.
    Classical,
    /// Mode-by-mode evaluation through the sine transform.
    Fft,
    /// Emulated linear-system solve plus mean-estimation read-out.
    Cas,
    /// Hierarchical integrator with amplitude-estimated means.
    Osk,
}

impl SweepMethod {
    pub const ALL: [SweepMethod; 4] = [SweepMethod::Classical, SweepMethod::Fft, SweepMethod::Cas, SweepMethod::Osk];

    pub fn name(&self) -> &'static str {
        match self {
            SweepMethod::Classical => "classical",
            SweepMethod::Fft => "fft",
            SweepMethod::Cas => "cas",
            SweepMethod::Osk => "osk",
        }
    }

    /// Cost model the method is compared against.
    pub fn model(&self) -> Option<ModelKind> {
        match self {
            SweepMethod::Classical => None,
            SweepMethod::Fft => Some(ModelKind::FftClassical),
            SweepMethod::Cas => Some(ModelKind::CasReadout),
            SweepMethod::Osk => Some(ModelKind::Osk),
        }
    }
}

impl fmt::Display for SweepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// Sweep description, normally read from TOML:
///
/// ```toml
/// methods = ["classical", "fft", "cas", "osk"]
/// m = [2, 4]
/// epsilon = [0.1, 0.05, 0.02]
/// seed = 7
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub methods: Vec<SweepMethod>,
    pub m: Vec<usize>,
    pub epsilon: Vec<f64>,
    pub seed: u64,
    /// Initial profile (`spike`, `uniform`, `sine:p`).
    pub initial: String,
    /// CFL number; each cell uses `N = m` steps.
    pub lambda: f64,
    /// Constant `c` in the walk-step count `c kappa ln(1/eps)`.
    pub walk_constant: f64,
    pub dt_walk: f64,
    pub filter_length: usize,
    pub sidelobe_db: f64,
    /// Hierarchy depth, Chebyshev nodes and samples per secondary step.
    pub osk_k: u32,
    pub osk_knf: usize,
    pub osk_kns: usize,
    /// Wall time is not reproducible, so it is off by default.
    pub record_wall_time: bool,
    pub output: Option<PathBuf>,
    pub gnuplot_dir: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            methods: SweepMethod::ALL.to_vec(),
            m: vec![2, 4],
            epsilon: vec![0.1, 0.05, 0.02],
            seed: 7,
            initial: "spike".into(),
            lambda: DEFAULT_LAMBDA,
            walk_constant: 4.0,
            dt_walk: 1.0,
            filter_length: 32,
            sidelobe_db: 40.0,
            osk_k: 2,
            osk_knf: 4,
            osk_kns: 16,
            record_wall_time: false,
            output: None,
            gnuplot_dir: None,
        }
    }
}

impl SweepConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let c: Self = toml::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() || self.m.is_empty() || self.epsilon.is_empty() {
            return Err(Error::Config("methods, m and epsilon must be non-empty".into()));
        }
        if let Some(e) = self.epsilon.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return Err(Error::Config(format!("epsilon {e} outside (0, 1)")));
        }
        if self.m.contains(&0) {
            return Err(Error::Config("m must be positive".into()));
        }
        if !(self.lambda > 0.0 && self.lambda <= 0.5) {
            return Err(Error::Config(format!("lambda {} outside (0, 1/2]", self.lambda)));
        }
        self.initial.parse::<InitialProfile>()?;
        Ok(())
    }

    /// Heat problem of one cell: `N = m` steps at the configured CFL number.
    pub fn problem(&self, m: usize) -> Result<HeatProblem> {
        let dx = 1.0 / (m + 1) as f64;
        let grid = Grid1D::new(0.0, 1.0, m, m as f64 * self.lambda * dx * dx, m)?;
        HeatProblem::from_profile(grid, 1.0, &self.initial.parse()?, Boundary::zero())
    }
}

/// One sweep cell. `achieved_error` is the deviation of the left-half heat at
/// the final time from the block-solve reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRecord {
    pub method: String,
    pub m: usize,
    pub epsilon: f64,
    pub predicted_cost: Option<f64>,
    pub measured_queries: Option<u64>,
    pub achieved_error: Option<f64>,
    /// Seconds; not comparable across methods (emulation overhead).
    pub wall_time_s: Option<f64>,
    pub status: String,
}

impl CostRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok" || self.status == "model"
    }
}

pub fn write_records<W: Write>(records: &[CostRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<CostRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Runs every (method, m, epsilon) cell; failures are recorded, not raised.
/// Output is sorted by method, then `m`, then `epsilon`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<CostRecord>> {
    config.validate()?;
    let mut cells = Vec::new();
    for &method in &config.methods {
        for &m in &config.m {
            for &eps in &config.epsilon {
                cells.push((method, m, eps));
            }
        }
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    cells.dedup();
    Ok(cells
        .par_iter()
        .enumerate()
        .map(|(idx, &(method, m, eps))| {
            let seed = config.seed.wrapping_add((idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let start = Instant::now();
            let result = run_cell(config, method, m, eps, seed);
            let wall = config.record_wall_time.then(|| start.elapsed().as_secs_f64());
            let predicted = method.model().map(|k| CostModel::new(k, m as f64).cost(eps)).transpose();
            match (result, predicted) {
                (Ok((queries, error)), Ok(predicted_cost)) => CostRecord {
                    method: method.name().into(),
                    m,
                    epsilon: eps,
                    predicted_cost,
                    measured_queries: Some(queries),
                    achieved_error: Some(error),
                    wall_time_s: wall,
                    status: "ok".into(),
                },
                (Err(e), _) | (_, Err(e)) => {
                    log::warn!("{method} m={m} eps={eps}: {e}");
                    CostRecord {
                        method: method.name().into(),
                        m,
                        epsilon: eps,
                        predicted_cost: None,
                        measured_queries: None,
                        achieved_error: None,
                        wall_time_s: wall,
                        status: format!("failed: {e}"),
                    }
                }
            }
        })
        .collect())
}

/// `(measured queries, achieved error)` for one cell.
fn run_cell(config: &SweepConfig, method: SweepMethod, m: usize, eps: f64, seed: u64) -> Result<(u64, f64)> {
    let problem = config.problem(m)?;
    let system = assemble_block_system(&problem)?;
    let reference = solve_block_direct(&system)?;
    let dx = problem.grid().delta_x();
    let region = Region::left_half(m);
    let exact = heat_in_region(reference.final_slice(), &region, dx)?;
    let n = problem.grid().n_steps() as u64;
    let m64 = m as u64;

    match method {
        SweepMethod::Classical => {
            let traj = march_explicit(&problem)?;
            Ok((m64 * n, (heat_in_region(traj.final_slice(), &region, dx)? - exact).abs()))
        }
        SweepMethod::Fft => {
            let traj = march_spectral(&problem)?;
            // Two transforms of length 2(m+1), counted as len * log2(len) butterflies.
            let len = 2 * (m64 + 1);
            let work = 2 * len * (64 - (len - 1).leading_zeros() as u64);
            Ok((work, (heat_in_region(traj.final_slice(), &region, dx)? - exact).abs()))
        }
        SweepMethod::Cas => {
            let dilated = 4 * system.dim().next_power_of_two();
            if dilated > MAX_DILATED_DIM {
                return Err(Error::TooLarge(dilated));
            }
            let kappa = condition_number(&system, &PowerSettings::default())?.kappa;
            let schedule = WalkSchedule::tuned(kappa, eps, config.walk_constant, config.dt_walk)?;
            let solve = solve_block_system_quantum(&system, &schedule, config.filter_length, config.sidelobe_db)?;
            let values = &solve.extraction.values;
            let last = &values[values.len() - m..];
            let state = InjectedState::new(last)?.with_preparation_cost(solve.walk_steps as u64);
            let r = heat_readout(&state, &region, &state.norms(dx), eps, Readout::Sample(seed))?;
            Ok((r.total_queries, (r.estimate - exact).abs()))
        }
        SweepMethod::Osk => {
            let t = problem.grid().t_final();
            let stiffness = 4.0 * problem.alpha() / (dx * dx);
            // Keep h_bar * rho(J) <= 1 so the degree-2 pieces stay stable.
            let k = config.osk_k;
            let mut primary = 2usize;
            while t / (primary as f64).powi(k as i32) * stiffness > 1.0 {
                primary += 1;
            }
            let hierarchy = build_hierarchy(t, primary, k, config.osk_knf, config.osk_kns)?;
            let estimator = MeanEstimator::Qae {
                ancillas: ancillas_for_epsilon(eps)?,
                readout: Readout::Sample(seed),
            };
            let report = osk_solve(&problem, &hierarchy, &SmoothnessParams::default(), &estimator)?;
            let got = heat_in_region(report.trajectory.final_slice(), &region, dx)?;
            Ok((report.queries, (got - exact).abs()))
        }
    }
}

/// Pure model evaluations (no solver runs) for every model kind, `m` and
/// `epsilon`; the high-dimensional model is evaluated at `d = 2`.
pub fn model_records(m_list: &[usize], epsilons: &[f64]) -> Result<Vec<CostRecord>> {
    let mut out = Vec::new();
    for kind in ModelKind::ALL {
        for &m in m_list {
            for &eps in epsilons {
                let model = CostModel::new(kind, m as f64).with_dimension(2);
                out.push(CostRecord {
                    method: kind.name().into(),
                    m,
                    epsilon: eps,
                    predicted_cost: Some(model.cost(eps)?),
                    measured_queries: None,
                    achieved_error: None,
                    wall_time_s: None,
                    status: "model".into(),
                });
            }
        }
    }
    Ok(out)
}

/// `count` points log-spaced from `hi` down to `lo`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![hi];
    }
    (0..count)
        .map(|i| hi * (lo / hi).powf(i as f64 / (count - 1) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(method: SweepMethod, m: usize, eps: Vec<f64>) -> SweepConfig {
        SweepConfig {
            methods: vec![method],
            m: vec![m],
            epsilon: eps,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn classical_cell_matches_direct_computation() {
        let c = single(SweepMethod::Classical, 4, vec![0.1]);
        let r = run_sweep(&c).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].status, "ok");
        assert_eq!(r[0].measured_queries, Some(16));
        assert!(r[0].achieved_error.unwrap() < 1e-15);
        assert_eq!(r[0].predicted_cost, None);
    }

    #[test]
    fn cas_walk_steps_follow_requested_accuracy() {
        let c = single(SweepMethod::Cas, 2, vec![0.1, 0.01]);
        let r = run_sweep(&c).unwrap();
        assert!(r.iter().all(|x| x.is_ok()), "{r:?}");
        assert!(r[0].measured_queries > r[1].measured_queries);
        for x in &r {
            assert!(x.achieved_error.unwrap() < 0.1, "{x:?}");
        }
    }

    #[test]
    fn failures_are_recorded() {
        let c = single(SweepMethod::Cas, 64, vec![0.1]);
        let r = run_sweep(&c).unwrap();
        assert!(r[0].status.starts_with("failed"));
        assert!(!r[0].is_ok());
    }

    #[test]
    fn csv_roundtrip() {
        let mut recs = model_records(&[4], &[0.1, 0.01]).unwrap();
        recs[0].measured_queries = Some(12);
        recs[1].achieved_error = Some(1.0 / 3.0);
        let mut buf = Vec::new();
        write_records(&recs, &mut buf).unwrap();
        assert_eq!(read_records(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::from_toml_str("m = []").is_err());
        assert!(SweepConfig::from_toml_str("epsilon = [1.5]").is_err());
        assert!(SweepConfig::from_toml_str("bogus = 1").is_err());
        let c = SweepConfig::from_toml_str("methods = [\"fft\"]\nm = [8]").unwrap();
        assert_eq!(c.methods, vec![SweepMethod::Fft]);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-4, 1e-1, 4);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[3] - 1e-4).abs() < 1e-18);
        assert!((g[1] - 1e-2).abs() < 1e-15);
    }
}
