use nalgebra::DMatrix;

use super::scheme::laplacian_for;
use super::{build_laplacian, BandMatrix, Grid1D, HeatProblem, Trajectory};
use crate::error::{Error, Result};

/// Lower block-bidiagonal all-at-once system `A u = b`.
///
/// Block row 0 is `u_0 = initial`; block row `n >= 1` is
/// `u_n - (I + L) u_{n-1} = forcing`, so the solution is the explicit
/// trajectory stacked slice by slice.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem {
    grid: Option<Grid1D>,
    m: usize,
    n_steps: usize,
    propagator: BandMatrix,
    rhs: Vec<f64>,
}

pub fn assemble_block_system(problem: &HeatProblem) -> Result<BlockSystem> {
    let lap = build_laplacian(problem)?;
    let grid = *problem.grid();
    let m = grid.m();
    let n = grid.n_steps();
    let forcing = lap.boundary_forcing(problem.boundary());
    let mut rhs = Vec::with_capacity((n + 1) * m);
    rhs.extend_from_slice(problem.initial());
    for _ in 0..n {
        rhs.extend_from_slice(&forcing);
    }
    Ok(BlockSystem {
        grid: Some(grid),
        m,
        n_steps: n,
        propagator: lap.propagator(),
        rhs,
    })
}

impl BlockSystem {
    /// Bare operator for `m` points, `N` steps and CFL number `lambda`;
    /// the right-hand side is a unit spike in the middle of slice 0.
    pub fn heat(m: usize, n_steps: usize, lambda: f64) -> Result<Self> {
        let lap = laplacian_for(m, lambda)?;
        let mut rhs = vec![0.0; (n_steps + 1) * m];
        rhs[(m - 1) / 2] = 1.0;
        Ok(Self {
            grid: None,
            m,
            n_steps,
            propagator: lap.propagator(),
            rhs,
        })
    }

    /// Replaces the right-hand side.
    pub fn with_rhs(mut self, rhs: Vec<f64>) -> Result<Self> {
        if rhs.len() != self.dim() {
            return Err(Error::ShapeMismatch {
                expected: self.dim(),
                actual: rhs.len(),
            });
        }
        self.rhs = rhs;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dim(&self) -> usize {
        (self.n_steps + 1) * self.m
    }

    pub fn grid(&self) -> Option<&Grid1D> {
        self.grid.as_ref()
    }

    pub fn propagator(&self) -> &BandMatrix {
        &self.propagator
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::ShapeMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        let m = self.m;
        let mut out = x.to_vec();
        for n in 1..=self.n_steps {
            let prev = self.propagator.matvec(&x[(n - 1) * m..n * m]);
            for (o, p) in out[n * m..(n + 1) * m].iter_mut().zip(prev) {
                *o -= p;
            }
        }
        Ok(out)
    }

    /// `A^T x`.
    pub fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        let m = self.m;
        let mut out = x.to_vec();
        for n in 1..=self.n_steps {
            let next = self.propagator.matvec_transpose(&x[n * m..(n + 1) * m]);
            for (o, p) in out[(n - 1) * m..n * m].iter_mut().zip(next) {
                *o -= p;
            }
        }
        Ok(out)
    }

    /// Solves `A x = y` by block forward substitution.
    pub fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        let m = self.m;
        let mut x = y.to_vec();
        for n in 1..=self.n_steps {
            let prev = self.propagator.matvec(&x[(n - 1) * m..n * m]);
            for (o, p) in x[n * m..(n + 1) * m].iter_mut().zip(prev) {
                *o += p;
            }
        }
        Ok(x)
    }

    /// Solves `A^T x = y` by block back substitution.
    pub fn solve_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        let m = self.m;
        let mut x = y.to_vec();
        for n in (1..=self.n_steps).rev() {
            let next = self.propagator.matvec_transpose(&x[n * m..(n + 1) * m]);
            for (o, p) in x[(n - 1) * m..n * m].iter_mut().zip(next) {
                *o += p;
            }
        }
        Ok(x)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let m = self.m;
        let mut a = DMatrix::identity(self.dim(), self.dim());
        let p = self.propagator.to_dense();
        for n in 1..=self.n_steps {
            let mut block = a.view_mut((n * m, (n - 1) * m), (m, m));
            block -= &p;
        }
        a
    }
}

/// Exact solution of the block system, reshaped into slices.
pub fn solve_block_direct(system: &BlockSystem) -> Result<Trajectory> {
    let grid = match system.grid {
        Some(g) => g,
        None => Grid1D::new(0.0, 1.0, system.m, system.n_steps.max(1) as f64, system.n_steps)?,
    };
    let x = system.solve(&system.rhs)?;
    let slices = x.chunks(system.m).map(<[f64]>::to_vec).collect();
    Trajectory::new(grid, slices)
}
