use crate::error::{Error, Result};

/// `f = offset + scale * g`; a degenerate record stands for constant input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub offset: f64,
    pub scale: f64,
    pub degenerate: bool,
}

impl AffineMap {
    pub fn to_unit(&self, f: f64) -> f64 {
        if self.degenerate {
            0.5
        } else {
            ((f - self.offset) / self.scale).clamp(0.0, 1.0)
        }
    }

    pub fn from_unit(&self, g: f64) -> f64 {
        if self.degenerate {
            self.offset
        } else {
            self.offset + self.scale * g
        }
    }
}

/// Shifts and scales samples onto `[0, 1]`; constant samples map to `1/2`.
pub fn rescale_to_unit(samples: &[f64]) -> Result<(Vec<f64>, AffineMap)> {
    if samples.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    if let Some(v) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite sample {v}")));
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let map = AffineMap {
        offset: lo,
        scale: hi - lo,
        degenerate: !(hi > lo),
    };
    Ok((samples.iter().map(|&f| map.to_unit(f)).collect(), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn maps_to_unit() {
        let (g, map) = rescale_to_unit(&[-2.0, 0.0, 2.0]).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
        assert!(!map.degenerate);
        let (g, map) = rescale_to_unit(&[3.0; 4]).unwrap();
        assert_eq!(g, vec![0.5; 4]);
        assert!(map.degenerate);
        assert_eq!(map.from_unit(0.5), 3.0);
        assert!(rescale_to_unit(&[]).is_err());
    }

    proptest! {
        #[test]
        fn mean_commutes(f in prop::collection::vec(-1e3f64..1e3, 1..40)) {
            let (g, map) = rescale_to_unit(&f).unwrap();
            let gm = g.iter().sum::<f64>() / g.len() as f64;
            let fm = f.iter().sum::<f64>() / f.len() as f64;
            prop_assert!((map.from_unit(gm) - fm).abs() < 1e-12 * (1.0 + fm.abs().max(map.scale)));
        }
    }
}
