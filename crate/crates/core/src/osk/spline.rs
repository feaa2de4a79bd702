use crate::error::{Error, Result};
use crate::grid::solve_tridiagonal;

/// One cubic piece on `[x0, x1]`:
/// `s(x) = m0 (x1-x)^3/(6h) + m1 (x-x0)^3/(6h) + C (x1-x) + D (x-x0)`
/// with `m0, m1` the second derivatives at the nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineSegment {
    pub x0: f64,
    pub x1: f64,
    pub m0: f64,
    pub m1: f64,
    pub c: f64,
    pub d: f64,
}

impl SplineSegment {
    fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn eval(&self, x: f64) -> f64 {
        let h = self.width();
        let (a, b) = (self.x1 - x, x - self.x0);
        self.m0 * a.powi(3) / (6.0 * h) + self.m1 * b.powi(3) / (6.0 * h) + self.c * a + self.d * b
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let h = self.width();
        let (a, b) = (self.x1 - x, x - self.x0);
        -self.m0 * a * a / (2.0 * h) + self.m1 * b * b / (2.0 * h) - self.c + self.d
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let h = self.width();
        (self.m0 * (self.x1 - x) + self.m1 * (x - self.x0)) / h
    }
}

/// Natural cubic spline (zero curvature at both outer nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalSpline {
    segments: Vec<SplineSegment>,
}

/// Builds the natural spline through `(nodes[p], values[p])`; nodes may come
/// in any order but must be distinct.
pub fn build_spline(nodes: &[f64], values: &[f64]) -> Result<NaturalSpline> {
    if nodes.len() != values.len() {
        return Err(Error::ShapeMismatch {
            expected: nodes.len(),
            actual: values.len(),
        });
    }
    if nodes.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: nodes.len(),
        });
    }
    if let Some(v) = nodes.iter().chain(values).find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite spline data {v}")));
    }
    let mut pts: Vec<(f64, f64)> = nodes.iter().copied().zip(values.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = pts.windows(2).find(|w| w[1].0 <= w[0].0) {
        return Err(Error::DuplicateNode(w[0].0));
    }

    let n = pts.len();
    let h: Vec<f64> = pts.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let slope: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let mut curv = vec![0.0; n];
    if n > 2 {
        let k = n - 2;
        let sub: Vec<f64> = (1..k).map(|i| h[i]).collect();
        let diag: Vec<f64> = (0..k).map(|i| 2.0 * (h[i] + h[i + 1])).collect();
        let sup: Vec<f64> = (0..k - 1).map(|i| h[i + 1]).collect();
        let rhs: Vec<f64> = (0..k).map(|i| 6.0 * (slope[i + 1] - slope[i])).collect();
        let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
        curv[1..n - 1].copy_from_slice(&inner);
    }

    let segments = (0..n - 1)
        .map(|i| {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[i + 1];
            let w = h[i];
            SplineSegment {
                x0,
                x1,
                m0: curv[i],
                m1: curv[i + 1],
                c: y0 / w - curv[i] * w / 6.0,
                d: y1 / w - curv[i + 1] * w / 6.0,
            }
        })
        .collect();
    Ok(NaturalSpline { segments })
}

impl NaturalSpline {
    pub fn segments(&self) -> &[SplineSegment] {
        &self.segments
    }

    /// Segment containing `x`; outside the node range the end pieces extend.
    pub fn segment(&self, x: f64) -> &SplineSegment {
        let idx = self.segments.partition_point(|s| s.x1 < x);
        &self.segments[idx.min(self.segments.len() - 1)]
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.segment(x).eval(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.segment(x).derivative(x)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.segment(x).second_derivative(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osk::lobatto_nodes;
    use proptest::prelude::*;

    #[test]
    fn two_nodes_is_linear() {
        let s = build_spline(&[1.0, 3.0], &[2.0, 6.0]).unwrap();
        let seg = s.segments()[0];
        assert_eq!((seg.m0, seg.m1), (0.0, 0.0));
        assert!((s.eval(2.0) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn reproduces_linear_data() {
        let x = [0.0, 0.3, 0.35, 0.9, 1.4];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v).collect();
        let s = build_spline(&x, &y).unwrap();
        for i in 0..=50 {
            let t = 1.4 * i as f64 / 50.0;
            assert!((s.eval(t) - (2.0 - 3.0 * t)).abs() < 1e-13);
        }
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert_eq!(build_spline(&[0.0, 1.0, 1.0], &[0.0; 3]).unwrap_err(), Error::DuplicateNode(1.0));
        assert!(build_spline(&[0.0], &[1.0]).is_err());
    }

    #[test]
    fn sine_on_lobatto_nodes() {
        // Dense sampling against the function itself. The zero end curvature
        // does not match sin'' at the ends, so the error is second order in
        // the interval width rather than fourth.
        let worst = |h: f64| {
            let t0 = 0.3;
            let w = lobatto_nodes(8, t0, h).unwrap();
            let y: Vec<f64> = w.iter().map(|t| t.sin()).collect();
            let s = build_spline(&w, &y).unwrap();
            (0..=1000)
                .map(|i| {
                    let t = t0 + h * i as f64 / 1000.0;
                    (s.eval(t) - t.sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let (coarse, fine) = (worst(0.05), worst(0.025));
        assert!(coarse <= 1e-3 * 0.35 * 0.05f64.powi(2), "{coarse}");
        assert!((coarse / fine - 4.0).abs() < 0.5, "{}", coarse / fine);
    }

    proptest! {
        #[test]
        fn interpolates_and_is_c2(ys in prop::collection::vec(-5.0f64..5.0, 3..10), gaps in prop::collection::vec(0.05f64..1.0, 9)) {
            let mut x = vec![0.0];
            for g in gaps.iter().take(ys.len() - 1) {
                x.push(x.last().unwrap() + g);
            }
            let s = build_spline(&x, &ys).unwrap();
            for (xi, yi) in x.iter().zip(&ys) {
                prop_assert!((s.eval(*xi) - yi).abs() < 1e-12);
            }
            for w in s.segments().windows(2) {
                let at = w[0].x1;
                prop_assert!((w[0].eval(at) - w[1].eval(at)).abs() < 1e-10);
                prop_assert!((w[0].derivative(at) - w[1].derivative(at)).abs() < 1e-10);
                prop_assert!((w[0].second_derivative(at) - w[1].second_derivative(at)).abs() < 1e-10);
            }
            prop_assert!(s.second_derivative(x[0]).abs() < 1e-12);
            prop_assert!(s.second_derivative(*x.last().unwrap()).abs() < 1e-12);
        }
    }
}
