//! One-dimensional heat equation on a uniform grid.
//!
//! Covers the discretization (grid, problem data), the explicit
//! forward-time/central-space scheme, the stacked block system whose solution
//! is the whole space-time trajectory, analytic references, and the
//! region-heat observable used as the common read-out for every solver.

mod band;
mod block;
mod config;
mod scheme;
mod spectral;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

pub use band::{solve_tridiagonal, BandMatrix};
pub use block::{assemble_block_system, solve_block_direct, BlockSystem};
pub use config::ProblemConfig;
pub use scheme::{build_laplacian, march_explicit, step_explicit, Laplacian, SchemeWarning};
pub use spectral::{dst1, march_spectral};

use crate::error::{Error, Result};

/// Default CFL number, half the explicit-stability limit.
pub const DEFAULT_LAMBDA: f64 = 0.25;

/// Uniform space-time grid. Interior nodes are `x_j = x0 + j * dx`, `j = 1..=m`;
/// `x_0` and `x_{m+1}` carry boundary data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x0: f64,
    x_end: f64,
    m: usize,
    t_final: f64,
    n_steps: usize,
}

impl Grid1D {
    /// `n_steps = 0` is accepted and describes the initial slice alone.
    pub fn new(x0: f64, x_end: f64, m: usize, t_final: f64, n_steps: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGrid("need at least one interior point".into()));
        }
        if !(x_end > x0) || !x0.is_finite() || !x_end.is_finite() {
            return Err(Error::InvalidGrid(format!("x_end ({x_end}) must exceed x0 ({x0})")));
        }
        if n_steps > 0 && !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidGrid(format!("t_final must be positive, got {t_final}")));
        }
        Ok(Self {
            x0,
            x_end,
            m,
            t_final,
            n_steps,
        })
    }

    /// Picks the smallest step count whose CFL number does not exceed `lambda`.
    pub fn with_lambda(x0: f64, x_end: f64, m: usize, t_final: f64, alpha: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(alpha > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "lambda ({lambda}) and alpha ({alpha}) must be positive"
            )));
        }
        let dx = (x_end - x0) / (m as f64 + 1.0);
        let dt_max = lambda * dx * dx / alpha;
        // Guard against t/dt landing a hair above an integer.
        let ratio = t_final / dt_max;
        let n = (ratio * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Self::new(x0, x_end, m, t_final, n)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x_end(&self) -> f64 {
        self.x_end
    }

    pub fn length(&self) -> f64 {
        self.x_end - self.x0
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn delta_x(&self) -> f64 {
        (self.x_end - self.x0) / (self.m as f64 + 1.0)
    }

    pub fn delta_t(&self) -> f64 {
        if self.n_steps == 0 {
            0.0
        } else {
            self.t_final / self.n_steps as f64
        }
    }

    /// CFL number `alpha * dt / dx^2`.
    pub fn lambda(&self, alpha: f64) -> f64 {
        let dx = self.delta_x();
        alpha * self.delta_t() / (dx * dx)
    }

    /// Position of node `j` (0 and `m + 1` are the boundary nodes).
    pub fn position(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.delta_x()
    }

    pub fn interior_positions(&self) -> Vec<f64> {
        (1..=self.m).map(|j| self.position(j)).collect()
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.delta_t()
    }

    /// Same spatial grid, different time axis.
    pub fn retimed(&self, t_final: f64, n_steps: usize) -> Result<Self> {
        Self::new(self.x0, self.x_end, self.m, t_final, n_steps)
    }
}

/// Time-constant Dirichlet data at the two ends.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Boundary {
    pub left: f64,
    pub right: f64,
}

impl Boundary {
    pub fn new(left: f64, right: f64) -> Self {
        Self { left, right }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.left == 0.0 && self.right == 0.0
    }
}

/// Named initial profiles, or explicit samples at the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    /// Unit value at the middle interior node, zero elsewhere.
    Spike,
    /// `sin(p * pi * (x - x0) / Lx)`.
    Sine(u32),
    Uniform,
    Samples(Vec<f64>),
}

impl InitialProfile {
    pub fn sample(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        let m = grid.m();
        match self {
            InitialProfile::Spike => {
                let mut u = vec![0.0; m];
                u[(m - 1) / 2] = 1.0;
                Ok(u)
            }
            InitialProfile::Sine(p) => {
                if *p == 0 {
                    return Err(Error::InvalidProblem("sine mode must be positive".into()));
                }
                let k = *p as f64 * PI / grid.length();
                Ok(grid
                    .interior_positions()
                    .iter()
                    .map(|x| (k * (x - grid.x0())).sin())
                    .collect())
            }
            InitialProfile::Uniform => Ok(vec![1.0; m]),
            InitialProfile::Samples(s) => {
                if s.len() != m {
                    return Err(Error::ShapeMismatch {
                        expected: m,
                        actual: s.len(),
                    });
                }
                Ok(s.clone())
            }
        }
    }
}

impl FromStr for InitialProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "spike" => Ok(InitialProfile::Spike),
            "uniform" => Ok(InitialProfile::Uniform),
            _ => {
                if let Some(p) = s.strip_prefix("sine:") {
                    let p: u32 = p
                        .parse()
                        .map_err(|_| Error::Config(format!("bad sine mode in '{s}'")))?;
                    if p == 0 {
                        return Err(Error::Config("sine mode must be positive".into()));
                    }
                    Ok(InitialProfile::Sine(p))
                } else if s == "sine" {
                    Ok(InitialProfile::Sine(1))
                } else {
                    Err(Error::Config(format!("unknown initial profile '{s}'")))
                }
            }
        }
    }
}

impl fmt::Display for InitialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialProfile::Spike => write!(f, "spike"),
            InitialProfile::Sine(p) => write!(f, "sine:{p}"),
            InitialProfile::Uniform => write!(f, "uniform"),
            InitialProfile::Samples(s) => write!(f, "samples[{}]", s.len()),
        }
    }
}

/// Heat problem on a [`Grid1D`].
///
/// [`HeatProblem::new`] rescales the data to unit total heat
/// (`dx * sum(u0) = 1`); boundary values are scaled by the same factor so the
/// scaled instance is the same PDE solution divided by `heat_scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatProblem {
    grid: Grid1D,
    alpha: f64,
    initial: Vec<f64>,
    boundary: Boundary,
    heat_scale: f64,
}

impl HeatProblem {
    pub fn new(grid: Grid1D, alpha: f64, initial: Vec<f64>, boundary: Boundary) -> Result<Self> {
        let mut p = Self::unnormalized(grid, alpha, initial, boundary)?;
        let total = p.total_heat();
        if total.is_finite() && total.abs() > f64::MIN_POSITIVE {
            p.initial.iter_mut().for_each(|u| *u /= total);
            p.boundary.left /= total;
            p.boundary.right /= total;
            p.heat_scale = total;
        }
        Ok(p)
    }

    /// Keeps the data as given (`heat_scale = 1`).
    pub fn unnormalized(grid: Grid1D, alpha: f64, initial: Vec<f64>, boundary: Boundary) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidProblem(format!("alpha must be positive, got {alpha}")));
        }
        if initial.len() != grid.m() {
            return Err(Error::ShapeMismatch {
                expected: grid.m(),
                actual: initial.len(),
            });
        }
        if initial.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidProblem("initial data must be finite".into()));
        }
        Ok(Self {
            grid,
            alpha,
            initial,
            boundary,
            heat_scale: 1.0,
        })
    }

    pub fn from_profile(grid: Grid1D, alpha: f64, profile: &InitialProfile, boundary: Boundary) -> Result<Self> {
        Self::new(grid, alpha, profile.sample(&grid)?, boundary)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Total heat of the data before normalization.
    pub fn heat_scale(&self) -> f64 {
        self.heat_scale
    }

    pub fn lambda(&self) -> f64 {
        self.grid.lambda(self.alpha)
    }

    /// `dx * sum(u0)`.
    pub fn total_heat(&self) -> f64 {
        self.grid.delta_x() * self.initial.iter().sum::<f64>()
    }

    /// Maps values of the normalized instance back to physical units.
    pub fn denormalize(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|v| v * self.heat_scale).collect()
    }

    pub fn with_grid(&self, grid: Grid1D) -> Result<Self> {
        if grid.m() != self.grid.m() {
            return Err(Error::ShapeMismatch {
                expected: self.grid.m(),
                actual: grid.m(),
            });
        }
        Ok(Self { grid, ..self.clone() })
    }
}

/// Half-open range of interior indices (0-based, so index `j` is node `j + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub start: usize,
    pub end: usize,
}

impl Region {
    pub fn new(start: usize, end: usize) -> Self {
        Self {
            start,
            end: end.max(start),
        }
    }

    pub fn full(m: usize) -> Self {
        Self::new(0, m)
    }

    pub fn left_half(m: usize) -> Self {
        Self::new(0, m / 2)
    }

    pub fn empty() -> Self {
        Self::new(0, 0)
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }

    pub fn check(&self, m: usize) -> Result<()> {
        if self.end > m {
            return Err(Error::InvalidArgument(format!(
                "region {}..{} exceeds {m} interior points",
                self.start, self.end
            )));
        }
        Ok(())
    }
}

impl FromStr for Region {
    type Err = Error;

    /// Accepts `full`, `left-half`, `empty`, or `a..b`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" | "left-half" | "empty" => Err(Error::Config(
                "symbolic regions need the grid size; use Region::parse_for".into(),
            )),
            t => {
                let (a, b) = t
                    .split_once("..")
                    .ok_or_else(|| Error::Config(format!("bad region '{t}'")))?;
                let a = a.parse().map_err(|_| Error::Config(format!("bad region '{t}'")))?;
                let b = b.parse().map_err(|_| Error::Config(format!("bad region '{t}'")))?;
                Ok(Region::new(a, b))
            }
        }
    }
}

impl Region {
    /// Like `FromStr`, resolving symbolic names against `m`.
    pub fn parse_for(s: &str, m: usize) -> Result<Self> {
        match s.trim() {
            "full" => Ok(Region::full(m)),
            "left-half" => Ok(Region::left_half(m)),
            "empty" => Ok(Region::empty()),
            other => other.parse(),
        }
    }
}

/// Riemann-sum heat `dx * sum_{j in S} u_j` of one time slice.
pub fn heat_in_region(slice: &[f64], region: &Region, delta_x: f64) -> Result<f64> {
    region.check(slice.len())?;
    Ok(delta_x * slice[region.indices()].iter().sum::<f64>())
}

/// Separation-of-variables solution for a single sine mode with zero
/// Dirichlet data, sampled at the interior nodes.
pub fn analytic_solution(mode: i64, alpha: f64, grid: &Grid1D, t: f64) -> Result<Vec<f64>> {
    if mode <= 0 {
        return Err(Error::InvalidArgument(format!("mode must be positive, got {mode}")));
    }
    let k = mode as f64 * PI / grid.length();
    let decay = (-alpha * k * k * t).exp();
    Ok(grid
        .interior_positions()
        .iter()
        .map(|x| decay * (k * (x - grid.x0())).sin())
        .collect())
}

/// Interior values at every time level `0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: Grid1D,
    slices: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(grid: Grid1D, slices: Vec<Vec<f64>>) -> Result<Self> {
        if slices.len() != grid.n_steps() + 1 {
            return Err(Error::ShapeMismatch {
                expected: grid.n_steps() + 1,
                actual: slices.len(),
            });
        }
        if let Some(bad) = slices.iter().find(|s| s.len() != grid.m()) {
            return Err(Error::ShapeMismatch {
                expected: grid.m(),
                actual: bad.len(),
            });
        }
        Ok(Self { grid, slices })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn slices(&self) -> &[Vec<f64>] {
        &self.slices
    }

    pub fn slice(&self, n: usize) -> &[f64] {
        &self.slices[n]
    }

    pub fn final_slice(&self) -> &[f64] {
        self.slices.last().expect("trajectory has at least one slice")
    }

    /// Stacked `[u(t_0); u(t_1); ...]`, the layout of the block system.
    pub fn flatten(&self) -> Vec<f64> {
        self.slices.iter().flatten().copied().collect()
    }

    /// Largest componentwise difference over all slices.
    pub fn max_abs_diff(&self, other: &Trajectory) -> f64 {
        self.slices
            .iter()
            .zip(&other.slices)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs()))
            .fold(0.0, f64::max)
    }

    /// Writes `t,x,u` rows, one per interior node and time level.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "x", "u"])?;
        let xs = self.grid.interior_positions();
        for (n, slice) in self.slices.iter().enumerate() {
            let t = self.grid.time(n).to_string();
            for (x, u) in xs.iter().zip(slice) {
                w.write_record([t.as_str(), &x.to_string(), &u.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid(m: usize, n: usize, t: f64) -> Grid1D {
        Grid1D::new(0.0, 1.0, m, t, n).unwrap()
    }

    #[test]
    fn grid_spacing_and_positions() {
        let g = unit_grid(3, 8, 0.25);
        assert_eq!(g.delta_x(), 0.25);
        assert_eq!(g.delta_t(), 1.0 / 32.0);
        assert_eq!(g.lambda(1.0), 0.5);
        assert_eq!(g.interior_positions(), vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid1D::new(0.0, 1.0, 0, 1.0, 1).is_err());
        assert!(Grid1D::new(1.0, 1.0, 3, 1.0, 1).is_err());
        assert!(Grid1D::new(0.0, 1.0, 3, -1.0, 1).is_err());
    }

    #[test]
    fn with_lambda_respects_cfl_bound() {
        let g = Grid1D::with_lambda(0.0, 1.0, 15, 1.0 / 32.0, 1.0, 0.25).unwrap();
        // dx = 1/16, dt_max = 1/1024 -> exactly 32 steps
        assert_eq!(g.n_steps(), 32);
        assert!((g.lambda(1.0) - 0.25).abs() < 1e-14);
        let g = Grid1D::with_lambda(0.0, 1.0, 9, 0.013, 1.0, 0.25).unwrap();
        assert!(g.lambda(1.0) <= 0.25 + 1e-14);
    }

    #[test]
    fn normalization_gives_unit_heat() {
        let g = unit_grid(9, 4, 0.1);
        for profile in [InitialProfile::Spike, InitialProfile::Sine(1), InitialProfile::Uniform] {
            let p = HeatProblem::from_profile(g, 1.0, &profile, Boundary::zero()).unwrap();
            assert!((p.total_heat() - 1.0).abs() < 1e-12, "{profile}");
            let full = heat_in_region(p.initial(), &Region::full(9), g.delta_x()).unwrap();
            assert!((full - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn denormalize_recovers_raw_data() {
        let g = unit_grid(4, 2, 0.1);
        let raw = vec![1.0, 2.0, 3.0, 4.0];
        let p = HeatProblem::new(g, 1.0, raw.clone(), Boundary::zero()).unwrap();
        let back = p.denormalize(p.initial());
        for (a, b) in back.iter().zip(&raw) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn region_heat_edge_cases() {
        let u = [1.0, 2.0, 2.0, 1.0];
        assert_eq!(heat_in_region(&u, &Region::empty(), 0.5).unwrap(), 0.0);
        let full = heat_in_region(&u, &Region::full(4), 0.5).unwrap();
        let left = heat_in_region(&u, &Region::left_half(4), 0.5).unwrap();
        assert!((left - 0.5 * full).abs() < 1e-15);
        assert!(heat_in_region(&u, &Region::new(2, 6), 0.5).is_err());
    }

    #[test]
    fn analytic_solution_basics() {
        let g = unit_grid(7, 1, 1.0);
        let u0 = analytic_solution(1, 1.0, &g, 0.0).unwrap();
        for (x, u) in g.interior_positions().iter().zip(&u0) {
            assert_eq!(*u, (PI * x).sin());
        }
        // Mode 2 has a zero at x = 1/2, which is node 4 of 7.
        let u2 = analytic_solution(2, 1.0, &g, 0.3).unwrap();
        assert!(u2[3].abs() < 1e-15);
        assert!(analytic_solution(0, 1.0, &g, 0.0).is_err());
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("spike".parse::<InitialProfile>().unwrap(), InitialProfile::Spike);
        assert_eq!("sine:3".parse::<InitialProfile>().unwrap(), InitialProfile::Sine(3));
        assert!("sine:0".parse::<InitialProfile>().is_err());
        assert!("bogus".parse::<InitialProfile>().is_err());
        assert_eq!(Region::parse_for("left-half", 8).unwrap(), Region::new(0, 4));
        assert_eq!(Region::parse_for("2..5", 8).unwrap(), Region::new(2, 5));
    }

    #[test]
    fn trajectory_csv_header_and_rows() {
        let g = unit_grid(2, 1, 0.5);
        let traj = Trajectory::new(g, vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,x,u");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("0.5,"));
    }
}
