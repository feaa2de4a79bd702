use super::{BandMatrix, Boundary, HeatProblem, Trajectory};
use crate::error::{Error, Result};

/// Non-fatal diagnostics raised while building the scheme.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeWarning {
    /// CFL number above 1/2: the explicit update is no longer stable.
    UnstableLambda(f64),
}

/// Discrete Laplacian `lambda * tridiag(1, -2, 1)` together with its scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    pub matrix: BandMatrix,
    pub lambda: f64,
    pub warnings: Vec<SchemeWarning>,
}

impl Laplacian {
    /// Explicit propagator `I + L`.
    pub fn propagator(&self) -> BandMatrix {
        self.matrix.plus_identity()
    }

    /// Boundary contribution `lambda * (left, 0, ..., 0, right)` added each step.
    pub fn boundary_forcing(&self, boundary: Boundary) -> Vec<f64> {
        let m = self.matrix.dim();
        let mut f = vec![0.0; m];
        f[0] += self.lambda * boundary.left;
        f[m - 1] += self.lambda * boundary.right;
        f
    }
}

pub fn build_laplacian(problem: &HeatProblem) -> Result<Laplacian> {
    laplacian_for(problem.grid().m(), problem.lambda())
}

pub(crate) fn laplacian_for(m: usize, lambda: f64) -> Result<Laplacian> {
    if m == 0 {
        return Err(Error::InvalidGrid("need at least one interior point".into()));
    }
    let mut warnings = Vec::new();
    if lambda > 0.5 {
        log::warn!("lambda = {lambda} exceeds 1/2; the explicit scheme is unstable");
        warnings.push(SchemeWarning::UnstableLambda(lambda));
    }
    let off = vec![lambda; m - 1];
    let main = vec![-2.0 * lambda; m];
    Ok(Laplacian {
        matrix: BandMatrix::tridiagonal(&off, &main, &off)?,
        lambda,
        warnings,
    })
}

/// One forward-Euler step `u + L u + boundary forcing`.
pub fn step_explicit(u: &[f64], laplacian: &Laplacian, boundary: Boundary) -> Result<Vec<f64>> {
    let m = laplacian.matrix.dim();
    if u.len() != m {
        return Err(Error::ShapeMismatch {
            expected: m,
            actual: u.len(),
        });
    }
    let lu = laplacian.matrix.matvec(u);
    let mut next: Vec<f64> = u.iter().zip(&lu).map(|(a, b)| a + b).collect();
    next[0] += laplacian.lambda * boundary.left;
    next[m - 1] += laplacian.lambda * boundary.right;
    Ok(next)
}

/// Applies [`step_explicit`] `N` times from the initial slice.
pub fn march_explicit(problem: &HeatProblem) -> Result<Trajectory> {
    let lap = build_laplacian(problem)?;
    let n = problem.grid().n_steps();
    let mut slices = Vec::with_capacity(n + 1);
    slices.push(problem.initial().to_vec());
    for k in 0..n {
        let next = step_explicit(&slices[k], &lap, problem.boundary())?;
        slices.push(next);
    }
    Trajectory::new(*problem.grid(), slices)
}
