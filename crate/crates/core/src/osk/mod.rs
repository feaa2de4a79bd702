//! Hierarchical Taylor/quadrature time-march for the semi-discrete heat
//! equation, with the per-subinterval mean delegated to a classical average
//! or to amplitude estimation.
//!
//! Each primary step `[t_i, t_i + h]` is split into `N_k` secondary steps of
//! length `h_bar`. On each secondary step a degree-`r` Taylor piece is
//! chained from the previous one, compressed to a natural cubic spline on
//! `K_nf` Chebyshev–Lobatto nodes, and `f` of the spline is averaged over
//! `K_ns` midpoint samples. The primary update is
//! `y_{i+1} = y_i + h_bar * sum_m mean_m`.

mod chebyshev;
mod estimator;
mod hierarchy;
mod reference;
mod rescale;
mod rhs;
mod spline;
mod taylor;

pub use chebyshev::{chebyshev_nodes, chebyshev_polynomial, lobatto_nodes};
pub use estimator::{MeanEstimate, MeanEstimator};
pub use hierarchy::{build_hierarchy, SubintervalHierarchy, MAX_SECONDARY};
pub use reference::{reference_solve, REFERENCE_STIFFNESS_STEP};
pub use rescale::{rescale_to_unit, AffineMap};
pub use rhs::{spatial_rhs, HeatRhs};
pub use spline::{build_spline, NaturalSpline, SplineSegment};
pub use taylor::{heat_taylor_piece, taylor_piece, TaylorPiece};

use rayon::prelude::*;

use crate::bench::cost_osk;
use crate::error::{Error, Result};
use crate::grid::{HeatProblem, Trajectory};

/// Smoothness class of the right-hand side: `r` bounded derivatives whose
/// last is Hölder with exponent `rho` and constant `holder_h`; `q = r + rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessParams {
    r: usize,
    rho: f64,
    holder_h: f64,
    gamma: f64,
}

impl SmoothnessParams {
    pub fn new(r: usize, rho: f64, holder_h: f64, gamma: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidArgument(format!("Hölder exponent must lie in (0, 1], got {rho}")));
        }
        if !(holder_h > 0.0) || !holder_h.is_finite() {
            return Err(Error::InvalidArgument(format!("Hölder constant must be positive, got {holder_h}")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        Ok(Self {
            r,
            rho,
            holder_h,
            gamma,
        })
    }

    /// Taylor degree used by the integrator.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn q(&self) -> f64 {
        self.r as f64 + self.rho
    }

    pub fn holder_h(&self) -> f64 {
        self.holder_h
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for SmoothnessParams {
    /// Degree-2 pieces; the heat right-hand side is smooth, so `rho = 1`.
    fn default() -> Self {
        Self {
            r: 2,
            rho: 1.0,
            holder_h: 1.0,
            gamma: 1.0,
        }
    }
}

/// Predicted sup-error decay rate `k (q + 1) - 1` in `1/n`.
pub fn osk_error_exponent(k: u32, params: &SmoothnessParams) -> f64 {
    k as f64 * (params.q() + 1.0) - 1.0
}

/// Query estimate `(1/eps)^(1/(q + 1 - gamma))`, unit constant, log factors dropped.
pub fn osk_complexity(params: &SmoothnessParams, epsilon: f64) -> Result<f64> {
    cost_osk(epsilon, params.q(), params.gamma())
}

/// Lower bound `(1/eps)^(1/(q + 1))`.
pub fn osk_lower_bound(params: &SmoothnessParams, epsilon: f64) -> Result<f64> {
    cost_osk(epsilon, params.q(), 0.0)
}

/// Outcome of one primary step.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimaryStep {
    pub y_next: Vec<f64>,
    /// Per-point sum of `h_bar * bound` over the secondary steps.
    pub bound: Vec<f64>,
    pub queries: u64,
    pub estimates: u64,
    /// Largest mismatch between adjacent Taylor pieces at shared endpoints.
    pub continuity_gap: f64,
}

/// Advances `y_i` over primary subinterval `i`. Estimator errors carry `i`.
pub fn advance_primary(
    y: &[f64],
    i: usize,
    hierarchy: &SubintervalHierarchy,
    problem: &HeatProblem,
    params: &SmoothnessParams,
    estimator: &MeanEstimator,
) -> Result<PrimaryStep> {
    let m = problem.grid().m();
    if y.len() != m {
        return Err(Error::ShapeMismatch {
            expected: m,
            actual: y.len(),
        });
    }
    if i >= hierarchy.n() {
        return Err(Error::InvalidArgument(format!("primary index {i} beyond n = {}", hierarchy.n())));
    }
    let wrap = |e: Error| Error::Subinterval {
        interval: i,
        source: Box::new(e),
    };
    let rhs = HeatRhs::new(problem);
    let (n_k, k_ns, h_bar) = (hierarchy.n_k(), hierarchy.k_ns(), hierarchy.h_bar());

    // Sequential chain of pieces; samples[sec][j] holds f_j at the K_ns points.
    let mut samples: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n_k);
    let mut continuity_gap = 0.0f64;
    let mut base = y.to_vec();
    for sec in 0..n_k {
        let t0 = hierarchy.secondary_time(i, sec);
        let t1 = hierarchy.secondary_time(i, sec + 1);
        let piece = heat_taylor_piece(&rhs, base, t0, t1 - t0, params.r()).map_err(wrap)?;
        let nodes = chebyshev_nodes(hierarchy, i, sec).map_err(wrap)?;
        let node_values: Vec<Vec<f64>> = nodes.iter().map(|&w| piece.eval(w)).collect();
        let splines = (0..m)
            .map(|j| {
                let vals: Vec<f64> = node_values.iter().map(|v| v[j]).collect();
                build_spline(&nodes, &vals)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(wrap)?;
        let mut per_point = vec![Vec::with_capacity(k_ns); m];
        for s in 0..k_ns {
            let g = t0 + (s as f64 + 0.5) * h_bar / k_ns as f64;
            let q: Vec<f64> = splines.iter().map(|sp| sp.eval(g)).collect();
            for (j, fj) in rhs.apply(&q).into_iter().enumerate() {
                per_point[j].push(fj);
            }
        }
        samples.push(per_point);

        base = piece.end_value();
        if sec + 1 < n_k {
            let next = heat_taylor_piece(&rhs, base.clone(), t1, h_bar, params.r()).map_err(wrap)?;
            let gap = piece
                .eval(t1)
                .iter()
                .zip(next.eval(t1))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            continuity_gap = continuity_gap.max(gap);
        }
    }

    // Independent estimates, collected in (sec, j) order for a fixed reduction.
    let first_task = (i * n_k * m) as u64;
    let estimates: Vec<MeanEstimate> = (0..n_k * m)
        .into_par_iter()
        .map(|task| {
            let (sec, j) = (task / m, task % m);
            estimator.for_task(first_task + task as u64).estimate(&samples[sec][j])
        })
        .collect::<Result<Vec<_>>>()
        .map_err(wrap)?;

    let mut y_next = y.to_vec();
    let mut bound = vec![0.0; m];
    let mut queries = 0u64;
    for (task, est) in estimates.iter().enumerate() {
        let j = task % m;
        y_next[j] += h_bar * est.mean;
        bound[j] += h_bar * est.bound;
        queries += est.queries;
    }
    Ok(PrimaryStep {
        y_next,
        bound,
        queries,
        estimates: estimates.len() as u64,
        continuity_gap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OskReport {
    /// Slices at `t_i = i h`, `i = 0..=n`.
    pub trajectory: Trajectory,
    /// Sup-norm deviation from the fine reference integration.
    pub sup_error: f64,
    /// Estimator queries (samples read, for the exact mean).
    pub queries: u64,
    pub estimates: u64,
    /// Linearly accumulated estimator bound at each slice (max over points).
    pub accumulated_bound: Vec<f64>,
    pub continuity_gap: f64,
    pub warnings: Vec<String>,
}

impl OskReport {
    /// Bound accumulated over the whole run.
    pub fn total_bound(&self) -> f64 {
        self.accumulated_bound.last().copied().unwrap_or(0.0)
    }
}

/// Runs all `n` primary steps from the initial data of `problem` over
/// `[0, hierarchy.t_total()]`; the problem's own time grid is ignored.
pub fn osk_solve(
    problem: &HeatProblem,
    hierarchy: &SubintervalHierarchy,
    params: &SmoothnessParams,
    estimator: &MeanEstimator,
) -> Result<OskReport> {
    let n = hierarchy.n();
    let grid = problem.grid().retimed(hierarchy.t_total(), n)?;
    let mut slices = Vec::with_capacity(n + 1);
    slices.push(problem.initial().to_vec());
    let mut per_point = vec![0.0; problem.grid().m()];
    let mut accumulated_bound = vec![0.0];
    let (mut queries, mut estimates, mut continuity_gap) = (0, 0, 0.0f64);
    for i in 0..n {
        let step = advance_primary(&slices[i], i, hierarchy, problem, params, estimator)?;
        for (acc, b) in per_point.iter_mut().zip(&step.bound) {
            *acc += b;
        }
        accumulated_bound.push(per_point.iter().copied().fold(0.0, f64::max));
        queries += step.queries;
        estimates += step.estimates;
        continuity_gap = continuity_gap.max(step.continuity_gap);
        slices.push(step.y_next);
    }

    let times: Vec<f64> = (0..=n).map(|i| hierarchy.primary_time(i)).collect();
    let reference = reference_solve(problem, &times)?;
    let sup_error = slices
        .iter()
        .zip(&reference)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max);

    Ok(OskReport {
        trajectory: Trajectory::new(grid, slices)?,
        sup_error,
        queries,
        estimates,
        accumulated_bound,
        continuity_gap,
        warnings: hierarchy.warnings().to_vec(),
    })
}
