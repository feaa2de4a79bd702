use super::rhs::HeatRhs;
use crate::error::{Error, Result};
use crate::grid::HeatProblem;

/// Step size times the spectral-radius bound of `J` used by the reference.
pub const REFERENCE_STIFFNESS_STEP: f64 = 0.02;

/// Classical RK4 on the semi-discrete system from the initial data,
/// returning the state at each requested time (ascending, non-negative).
/// The step keeps `dt * rho(J)` at [`REFERENCE_STIFFNESS_STEP`], far inside
/// the stability region, so the result is accurate to rounding for smooth data.
pub fn reference_solve(problem: &HeatProblem, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::InvalidArgument("reference times must be ascending and non-negative".into()));
    }
    let rhs = HeatRhs::new(problem);
    let max_dt = REFERENCE_STIFFNESS_STEP / (4.0 * rhs.stiffness());
    let mut u = problem.initial().to_vec();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / max_dt).ceil() as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                rk4_step(&rhs, &mut u, dt);
            }
        }
        t = target;
        out.push(u.clone());
    }
    Ok(out)
}

fn rk4_step(rhs: &HeatRhs, u: &mut [f64], dt: f64) {
    let axpy = |a: &[f64], k: &[f64], s: f64| a.iter().zip(k).map(|(x, y)| x + s * y).collect::<Vec<_>>();
    let k1 = rhs.apply(u);
    let k2 = rhs.apply(&axpy(u, &k1, dt / 2.0));
    let k3 = rhs.apply(&axpy(u, &k2, dt / 2.0));
    let k4 = rhs.apply(&axpy(u, &k3, dt));
    for j in 0..u.len() {
        u[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Boundary, Grid1D, InitialProfile};

    #[test]
    fn matches_discrete_eigenmode() {
        // Sine data is an eigenvector of J with eigenvalue -4/dx^2 sin^2(pi dx / 2).
        let m = 16;
        let g = Grid1D::new(0.0, 1.0, m, 0.1, 1).unwrap();
        let p = HeatProblem::unnormalized(g, 1.0, InitialProfile::Sine(1).sample(&g).unwrap(), Boundary::zero()).unwrap();
        let dx = g.delta_x();
        let mu = -4.0 / (dx * dx) * (std::f64::consts::PI * dx / 2.0).sin().powi(2);
        let out = reference_solve(&p, &[0.0, 0.05, 0.1]).unwrap();
        for (t, u) in [0.0, 0.05, 0.1].iter().zip(&out) {
            for (a, b) in u.iter().zip(p.initial()) {
                assert!((a - b * (mu * t).exp()).abs() < 1e-12);
            }
        }
        assert!(reference_solve(&p, &[0.1, 0.05]).is_err());
    }
}
