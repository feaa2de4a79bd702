use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::path::HamiltonianPath;
use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// `W = exp(i H dt)` held in the eigenbasis of the real symmetric `H`.
#[derive(Debug, Clone)]
pub struct WalkOperator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    dt: f64,
}

impl WalkOperator {
    pub fn new(h: &DMatrix<f64>, dt: f64) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
            dt,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Columns are the eigenvectors of `H`, shared by `W`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `lambda_k * dt`.
    pub fn eigenphases(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l * self.dt).collect()
    }

    /// Coordinates `V^T psi` of a state in the eigenbasis.
    pub fn to_eigenbasis(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let (re, im) = split(psi);
        let cr = self.eigenvectors.tr_mul(&re);
        let ci = self.eigenvectors.tr_mul(&im);
        cr.iter().zip(ci.iter()).map(|(r, i)| Complex64::new(*r, *i)).collect()
    }

    pub fn from_eigenbasis(&self, c: &[Complex64]) -> Vec<Complex64> {
        let (re, im) = split(c);
        let xr = &self.eigenvectors * re;
        let xi = &self.eigenvectors * im;
        xr.iter().zip(xi.iter()).map(|(r, i)| Complex64::new(*r, *i)).collect()
    }

    /// `psi <- W^power psi`.
    pub fn apply_power(&self, psi: &mut [Complex64], power: usize) {
        let mut c = self.to_eigenbasis(psi);
        for (ck, l) in c.iter_mut().zip(self.eigenvalues.iter()) {
            *ck *= Complex64::from_polar(1.0, l * self.dt * power as f64);
        }
        psi.copy_from_slice(&self.from_eigenbasis(&c));
    }

    pub fn apply(&self, state: &mut StateVector) {
        self.apply_power(state.amplitudes_mut(), 1);
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let v = self.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let phases = DMatrix::from_diagonal(&self.eigenvalues.map(|l| Complex64::from_polar(1.0, l * self.dt)));
        &v * phases * v.transpose()
    }
}

fn split(v: &[Complex64]) -> (DVector<f64>, DVector<f64>) {
    (
        DVector::from_iterator(v.len(), v.iter().map(|a| a.re)),
        DVector::from_iterator(v.len(), v.iter().map(|a| a.im)),
    )
}

/// `W(s) = exp(i H(s) dt_w)`.
pub fn walk_step(path: &HamiltonianPath, s: f64, dt_w: f64) -> WalkOperator {
    WalkOperator::new(&path.at(s), dt_w)
}

/// Linear schedule `s_k = k / T`, `k = 0..T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkSchedule {
    pub steps: usize,
    pub dt_w: f64,
    /// Target state error the schedule was tuned for (informational).
    pub epsilon_state: f64,
}

impl WalkSchedule {
    /// `steps = 0` is allowed and leaves the state untouched.
    pub fn new(steps: usize, dt_w: f64) -> Result<Self> {
        if !(dt_w > 0.0) || !dt_w.is_finite() {
            return Err(Error::InvalidArgument(format!("walk duration must be positive, got {dt_w}")));
        }
        Ok(Self {
            steps,
            dt_w,
            epsilon_state: f64::NAN,
        })
    }

    /// Step count `ceil(c * kappa * ln(1/eps))`.
    pub fn tuned(kappa: f64, epsilon_state: f64, c: f64, dt_w: f64) -> Result<Self> {
        let steps = walk_step_cost(kappa, epsilon_state, c)?.ceil() as usize;
        Ok(Self {
            epsilon_state,
            ..Self::new(steps, dt_w)?
        })
    }

    pub fn s(&self, k: usize) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            k as f64 / self.steps as f64
        }
    }
}

/// Walk-step cost model `c * kappa * ln(1/eps)`.
pub fn walk_step_cost(kappa: f64, epsilon: f64, c: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    Ok(c * kappa * (1.0 / epsilon).ln())
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: StateVector,
    /// `|<x(s_k)|psi_k>|^2` for `k = 0..=T`, with `x(s)` the followed null vector.
    pub overlaps: Vec<f64>,
    /// Largest `| ||psi|| - 1 |` seen after any step.
    pub max_norm_drift: f64,
    pub walk_steps: usize,
}

/// Applies `W(0), W(1/T), ..., W((T-1)/T)` in order.
pub fn adiabatic_evolve(path: &HamiltonianPath, schedule: &WalkSchedule, initial: &StateVector) -> Result<Evolution> {
    if initial.dim() != path.dim() {
        return Err(Error::ShapeMismatch {
            expected: path.dim(),
            actual: initial.dim(),
        });
    }
    let mut state = initial.clone();
    let mut overlaps = Vec::with_capacity(schedule.steps + 1);
    overlaps.push(path.instantaneous_state(0.0)?.fidelity(&state));
    let mut drift: f64 = 0.0;
    for k in 0..schedule.steps {
        walk_step(path, schedule.s(k), schedule.dt_w).apply(&mut state);
        drift = drift.max((state.norm() - 1.0).abs());
        let s_next = (k + 1) as f64 / schedule.steps as f64;
        overlaps.push(path.instantaneous_state(s_next)?.fidelity(&state));
    }
    Ok(Evolution {
        state,
        overlaps,
        max_norm_drift: drift,
        walk_steps: schedule.steps,
    })
}

/// `||dH|| / (T * gap^2)`.
pub fn adiabatic_bound(derivative_norm: f64, gap: f64, steps: usize) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::ZeroGap(f64::NAN));
    }
    Ok(derivative_norm / (steps as f64 * gap * gap))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBound {
    pub derivative_norm: f64,
    pub gap_min: f64,
    pub gap_argmin: f64,
    pub bound: f64,
}

/// Points of the s-grid used to locate the minimum gap.
pub const GAP_GRID: usize = 33;

pub fn adiabatic_error_bound(path: &HamiltonianPath, schedule: &WalkSchedule) -> Result<ErrorBound> {
    let (s, gap) = path.min_gap(GAP_GRID);
    // An all-null spectrum (infinite gap) only arises for degenerate input.
    if !(gap > 0.0) || gap.is_infinite() {
        return Err(Error::ZeroGap(s));
    }
    let derivative_norm = path.derivative_norm();
    Ok(ErrorBound {
        derivative_norm,
        gap_min: gap,
        gap_argmin: s,
        bound: adiabatic_bound(derivative_norm, gap, schedule.steps.max(1))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BlockSystem;
    use crate::qlsp::build_hamiltonian_path;
    use std::f64::consts::PI;

    #[test]
    fn diag_walk_at_pi_is_minus_identity() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let w = WalkOperator::new(&h, PI).to_matrix();
        let minus_i = DMatrix::<Complex64>::identity(2, 2) * Complex64::new(-1.0, 0.0);
        assert!((w - minus_i).camax() < 1e-14);
    }

    #[test]
    fn zero_duration_is_identity() {
        let h = DMatrix::from_row_slice(2, 2, &[0.3, 0.7, 0.7, -0.1]);
        let w = WalkOperator::new(&h, 0.0).to_matrix();
        assert!((w - DMatrix::<Complex64>::identity(2, 2)).camax() < 1e-14);
    }

    #[test]
    fn walk_is_unitary_along_path() {
        let sys = BlockSystem::heat(2, 2, 0.25).unwrap();
        let p = crate::qlsp::HamiltonianPath::from_block_system(&sys).unwrap();
        for s in [0.0, 0.137, 0.5, 0.871, 1.0] {
            let w = walk_step(&p, s, 1.0).to_matrix();
            let d = w.adjoint() * &w - DMatrix::<Complex64>::identity(p.dim(), p.dim());
            assert!(d.camax() < 1e-10);
        }
    }

    #[test]
    fn zero_steps_leave_state() {
        let p = build_hamiltonian_path(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -0.5, 1.0]), &[1.0, 0.0]).unwrap();
        let init = p.initial_state();
        let ev = adiabatic_evolve(&p, &WalkSchedule::new(0, 1.0).unwrap(), &init).unwrap();
        assert_eq!(ev.state, init);
        assert_eq!(ev.walk_steps, 0);
    }

    #[test]
    fn identity_path_keeps_full_fidelity() {
        let p = build_hamiltonian_path(&DMatrix::identity(4, 4), &[1.0, -1.0, 0.5, 0.0]).unwrap();
        let target = p.solution_state().unwrap();
        for t in [1, 5, 17] {
            let ev = adiabatic_evolve(&p, &WalkSchedule::new(t, 1.0).unwrap(), &p.initial_state()).unwrap();
            assert!((ev.state.fidelity(&target) - 1.0).abs() < 1e-12);
            assert!(ev.max_norm_drift < 1e-12);
        }
    }

    #[test]
    fn bound_arithmetic() {
        assert!((adiabatic_bound(1.0, 0.5, 100).unwrap() - 0.04).abs() < 1e-15);
        let a = adiabatic_bound(0.7, 0.3, 10).unwrap();
        let b = adiabatic_bound(0.7, 0.3, 20).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-15);
        assert!(adiabatic_bound(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn tuned_schedule_accounting() {
        let s = WalkSchedule::tuned(10.0, 0.01, 2.0, 1.0).unwrap();
        let cost = walk_step_cost(10.0, 0.01, 2.0).unwrap();
        assert_eq!(cost, 2.0 * 10.0 * 100f64.ln());
        assert_eq!(s.steps, cost.ceil() as usize);
        assert!(walk_step_cost(10.0, 1.5, 1.0).is_err());
    }
}
