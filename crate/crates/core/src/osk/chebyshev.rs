use std::f64::consts::PI;

use super::hierarchy::SubintervalHierarchy;
use crate::error::{Error, Result};

/// `T_n(x)` by the three-term recurrence.
pub fn chebyshev_polynomial(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Chebyshev–Lobatto nodes `w_p = (cos(pi p / (K - 1)) + 1) / 2 * h + t0`
/// for `p = 0..K`, i.e. from the right endpoint down to the left one.
pub fn lobatto_nodes(count: usize, t0: f64, width: f64) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: count });
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|p| {
            // Pin the endpoints so they are exact.
            if p == 0 {
                t0 + width
            } else if p == count - 1 {
                t0
            } else {
                ((PI * p as f64 / last).cos() + 1.0) / 2.0 * width + t0
            }
        })
        .collect())
}

/// Nodes of secondary subinterval `m` of primary step `i`.
pub fn chebyshev_nodes(hierarchy: &SubintervalHierarchy, i: usize, m: usize) -> Result<Vec<f64>> {
    if i >= hierarchy.n() || m >= hierarchy.n_k() {
        return Err(Error::InvalidArgument(format!(
            "subinterval ({i}, {m}) outside {}x{} hierarchy",
            hierarchy.n(),
            hierarchy.n_k()
        )));
    }
    lobatto_nodes(hierarchy.k_nf(), hierarchy.secondary_time(i, m), hierarchy.h_bar())
}
