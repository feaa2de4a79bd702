use super::rhs::HeatRhs;
use crate::error::{Error, Result};

/// Vector Taylor polynomial
/// `A(t) = base + sum_{v=1..r} d_{v-1} (t - t_base)^v / v!`,
/// where `d_{v-1}` is the `(v-1)`-th time derivative of `f` at the base.
/// The truncation remainder is `O(h_bar^(r+1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPiece {
    t_base: f64,
    t_end: f64,
    base: Vec<f64>,
    derivatives: Vec<Vec<f64>>,
}

pub fn taylor_piece(base: Vec<f64>, derivatives: Vec<Vec<f64>>, t_base: f64, t_end: f64, r: usize) -> Result<TaylorPiece> {
    if derivatives.len() != r {
        return Err(Error::ShapeMismatch {
            expected: r,
            actual: derivatives.len(),
        });
    }
    if let Some(d) = derivatives.iter().find(|d| d.len() != base.len()) {
        return Err(Error::ShapeMismatch {
            expected: base.len(),
            actual: d.len(),
        });
    }
    if !(t_end >= t_base) {
        return Err(Error::InvalidArgument(format!("piece interval [{t_base}, {t_end}] is reversed")));
    }
    Ok(TaylorPiece {
        t_base,
        t_end,
        base,
        derivatives,
    })
}

/// Degree-`r` piece of the heat flow from `base`: `d_0 = f(base)` and
/// `d_v = J d_{v-1}`, exact for the affine right-hand side.
pub fn heat_taylor_piece(rhs: &HeatRhs, base: Vec<f64>, t_base: f64, width: f64, r: usize) -> Result<TaylorPiece> {
    let mut derivatives = Vec::with_capacity(r);
    if r > 0 {
        derivatives.push(rhs.apply(&base));
        for _ in 1..r {
            let next = rhs.apply_linear(derivatives.last().unwrap());
            derivatives.push(next);
        }
    }
    taylor_piece(base, derivatives, t_base, t_base + width, r)
}

impl TaylorPiece {
    pub fn t_base(&self) -> f64 {
        self.t_base
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn degree(&self) -> usize {
        self.derivatives.len()
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let dt = t - self.t_base;
        let mut out = self.base.clone();
        let mut coeff = 1.0;
        for (v, d) in self.derivatives.iter().enumerate() {
            coeff *= dt / (v + 1) as f64;
            for (o, di) in out.iter_mut().zip(d) {
                *o += coeff * di;
            }
        }
        out
    }

    pub fn end_value(&self) -> Vec<f64> {
        self.eval(self.t_end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Boundary, Grid1D, HeatProblem, InitialProfile};
    use crate::osk::reference_solve;

    #[test]
    fn euler_piece() {
        let p = taylor_piece(vec![1.0, 2.0], vec![vec![3.0, -1.0]], 0.5, 1.0, 1).unwrap();
        assert_eq!(p.eval(0.5), vec![1.0, 2.0]);
        let v = p.eval(0.75);
        assert!((v[0] - 1.75).abs() < 1e-15 && (v[1] - 1.75).abs() < 1e-15);
        assert!(taylor_piece(vec![1.0], vec![], 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn second_order_local_error() {
        // One-step error against a fine fourth-order integration drops ~8x
        // when the step halves.
        let g = Grid1D::new(0.0, 1.0, 8, 1.0, 1).unwrap();
        let prob = HeatProblem::from_profile(g, 1.0, &InitialProfile::Sine(1), Boundary::zero()).unwrap();
        let rhs = HeatRhs::new(&prob);
        let err = |h: f64| {
            let piece = heat_taylor_piece(&rhs, prob.initial().to_vec(), 0.0, h, 2).unwrap();
            let refv = reference_solve(&prob, &[h]).unwrap();
            piece
                .end_value()
                .iter()
                .zip(&refv[0])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(2e-3) / err(1e-3);
        assert!((ratio - 8.0).abs() < 0.5, "{ratio}");
    }
}
