use crate::error::{Error, Result};
use crate::grid::HeatProblem;

/// Semi-discrete heat right-hand side `f(u) = J u + c` on the interior nodes,
/// with the Dirichlet values entering as ghost neighbours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatRhs {
    m: usize,
    coeff: f64,
    left: f64,
    right: f64,
}

impl HeatRhs {
    pub fn new(problem: &HeatProblem) -> Self {
        let dx = problem.grid().delta_x();
        let b = problem.boundary();
        Self {
            m: problem.grid().m(),
            coeff: problem.alpha() / (dx * dx),
            left: b.left,
            right: b.right,
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// `alpha / dx^2`; the spectral radius of `J` is below `4` times this.
    pub fn stiffness(&self) -> f64 {
        self.coeff
    }

    /// `f(u)` including boundary forcing.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.stencil(u, self.left, self.right)
    }

    /// `J v`: the linear part only, i.e. the time derivative of `f` along `v`.
    pub fn apply_linear(&self, v: &[f64]) -> Vec<f64> {
        self.stencil(v, 0.0, 0.0)
    }

    fn stencil(&self, u: &[f64], left: f64, right: f64) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|j| {
                let lo = if j == 0 { left } else { u[j - 1] };
                let hi = if j + 1 == m { right } else { u[j + 1] };
                self.coeff * (lo + hi - 2.0 * u[j])
            })
            .collect()
    }
}

pub fn spatial_rhs(u: &[f64], problem: &HeatProblem) -> Result<Vec<f64>> {
    if u.len() != problem.grid().m() {
        return Err(Error::ShapeMismatch {
            expected: problem.grid().m(),
            actual: u.len(),
        });
    }
    Ok(HeatRhs::new(problem).apply(u))
}
