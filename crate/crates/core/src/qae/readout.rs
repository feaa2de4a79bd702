use num_complex::Complex64;

use super::estimate::{mean_estimate_bounded, EstimationResult, Readout};
use super::oracle::{Preparation, Projector};
use crate::bench::cost_cas_readout;
use crate::error::{Error, Result};
use crate::grid::Region;

/// Exact amplitude injection of a real vector: a Householder reflection
/// (sign-adjusted) that maps `|0>` to `u / ||u||`.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectedState {
    target: Vec<f64>,
    len: usize,
    l2_norm: f64,
    v: Vec<f64>,
    v_norm_sq: f64,
    sign: f64,
    preparation_cost: u64,
}

impl InjectedState {
    pub fn new(values: &[f64]) -> Result<Self> {
        let l2_norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(l2_norm > 0.0) || !l2_norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let dim = values.len().next_power_of_two().max(2);
        let mut target: Vec<f64> = values.iter().map(|v| v / l2_norm).collect();
        target.resize(dim, 0.0);
        // With v = e0 - sign * x the reflection sends e0 to sign * x; the
        // sign is chosen against x0 so v never suffers cancellation, and the
        // output is multiplied by it once more.
        let sign = if target[0] > 0.0 { -1.0 } else { 1.0 };
        let mut v: Vec<f64> = target.iter().map(|x| -sign * x).collect();
        v[0] += 1.0;
        let v_norm_sq = v.iter().map(|a| a * a).sum();
        Ok(Self {
            target,
            len: values.len(),
            l2_norm,
            v,
            v_norm_sq,
            sign,
            preparation_cost: 1,
        })
    }

    /// Charges each use of the preparation as `cost` queries (e.g. the walk
    /// steps of a linear-system solve that produced the state).
    pub fn with_preparation_cost(mut self, cost: u64) -> Self {
        self.preparation_cost = cost.max(1);
        self
    }

    pub fn preparation_cost(&self) -> u64 {
        self.preparation_cost
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    /// Normalized, zero-padded amplitudes.
    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn norms(&self, delta_x: f64) -> ReadoutNorms {
        ReadoutNorms {
            l2_norm: self.l2_norm,
            delta_x,
        }
    }

    fn reflect(&self, amps: &mut [Complex64]) {
        let c: Complex64 = self.v.iter().zip(amps.iter()).map(|(v, a)| a * v).sum();
        let f = c * (2.0 / self.v_norm_sq);
        for (a, v) in amps.iter_mut().zip(&self.v) {
            *a = (*a - f * v) * self.sign;
        }
    }
}

impl Preparation for InjectedState {
    fn dim(&self) -> usize {
        self.target.len()
    }

    fn initial_index(&self) -> usize {
        0
    }

    fn apply(&self, amps: &mut [Complex64]) {
        self.reflect(amps);
    }

    fn apply_inverse(&self, amps: &mut [Complex64]) {
        // Real symmetric involution.
        self.reflect(amps);
    }
}

/// Classical norms needed to turn a projector mass back into heat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutNorms {
    pub l2_norm: f64,
    pub delta_x: f64,
}

/// Diagonal projector onto the grid indices of `region`.
pub fn region_mask(region: &Region, dim: usize) -> Projector {
    Projector::Mask((0..dim).map(|i| i >= region.start && i < region.end).collect())
}

/// `|phi_S><phi_S|` with `phi_S` uniform over `region`.
pub fn region_uniform_projector(region: &Region, dim: usize) -> Result<Projector> {
    if region.is_empty() {
        return Err(Error::InvalidArgument("empty region has no uniform state".into()));
    }
    let amp = 1.0 / (region.len() as f64).sqrt();
    Ok(Projector::Rank1(
        (0..dim)
            .map(|i| {
                if i >= region.start && i < region.end {
                    Complex64::new(amp, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatReadout {
    /// Estimated `H_S = dx * sum_{j in S} u_j`.
    pub estimate: f64,
    /// Underlying mass estimate (absent for an empty region).
    pub estimation: Option<EstimationResult>,
    /// Mean-estimation queries times the preparation cost.
    pub total_queries: u64,
    /// `m ln(1/eps) / eps` for the same `m` and `eps`.
    pub model_cost: f64,
}

/// Estimates the heat in `region` from the injected solution state.
///
/// The mass `a = |<phi_S|x>|^2` of the uniform region state is estimated;
/// since `<phi_S|x> = sum_S u_j / (||u|| sqrt|S|)`, the heat follows as
/// `dx * ||u|| * sqrt(|S| a)` (non-negative data assumed).
pub fn heat_readout(
    state: &InjectedState,
    region: &Region,
    norms: &ReadoutNorms,
    epsilon: f64,
    readout: Readout,
) -> Result<HeatReadout> {
    region.check(state.len())?;
    let model_cost = cost_cas_readout(state.len() as f64, epsilon)?;
    if region.is_empty() {
        return Ok(HeatReadout {
            estimate: 0.0,
            estimation: None,
            total_queries: 0,
            model_cost,
        });
    }
    let projector = region_uniform_projector(region, state.dim())?;
    let est = mean_estimate_bounded(state, &projector, epsilon, readout)?;
    let estimate = norms.delta_x * norms.l2_norm * (region.len() as f64 * est.amplitude).sqrt();
    Ok(HeatReadout {
        estimate,
        total_queries: est.queries * state.preparation_cost(),
        estimation: Some(est),
        model_cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qae::prepare_state;

    #[test]
    fn injection_reproduces_vector() {
        for u in [vec![3.0, 4.0], vec![-1.0, 2.0, 0.5], vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 2.0]] {
            let s = InjectedState::new(&u).unwrap();
            let psi = prepare_state(&s);
            for (a, x) in psi.amplitudes().iter().zip(s.target()) {
                assert!((a.re - x).abs() < 1e-14 && a.im.abs() < 1e-15);
            }
            let mut back = psi.amplitudes().to_vec();
            s.apply_inverse(&mut back);
            assert!((back[0].re - 1.0).abs() < 1e-14);
        }
        assert!(InjectedState::new(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn empty_region_reads_zero() {
        let s = InjectedState::new(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let r = heat_readout(&s, &Region::empty(), &s.norms(0.2), 0.05, Readout::Argmax).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.total_queries, 0);
    }

    #[test]
    fn preparation_cost_multiplies_queries() {
        let s = InjectedState::new(&[1.0, 2.0, 3.0, 4.0]).unwrap().with_preparation_cost(10);
        let r = heat_readout(&s, &Region::new(0, 2), &s.norms(0.2), 0.05, Readout::Argmax).unwrap();
        assert_eq!(r.total_queries, 10 * r.estimation.unwrap().queries);
    }
}
