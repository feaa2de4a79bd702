use log::info;

use crate::error::{Error, Result};

/// Largest number of secondary subintervals per primary step accepted.
pub const MAX_SECONDARY: usize = 1 << 20;

/// Two-level time partition: `n` primary steps of length `h = T/n`, each
/// split into `N_k = n^(k-1)` secondary steps of length `h_bar = T/n^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubintervalHierarchy {
    t_total: f64,
    n: usize,
    k: u32,
    n_k: usize,
    k_nf: usize,
    k_ns: usize,
    warnings: Vec<String>,
}

pub fn build_hierarchy(t_total: f64, n: usize, k: u32, k_nf: usize, k_ns: usize) -> Result<SubintervalHierarchy> {
    if !(t_total > 0.0) || !t_total.is_finite() {
        return Err(Error::InvalidArgument(format!("time horizon must be positive, got {t_total}")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 primary subintervals, got {n}")));
    }
    if k < 1 {
        return Err(Error::InvalidArgument("hierarchy depth k must be at least 1".into()));
    }
    if k_nf < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: k_nf });
    }
    if k_ns < 1 {
        return Err(Error::TooFewPoints { needed: 1, got: k_ns });
    }
    let n_k = n
        .checked_pow(k - 1)
        .filter(|&v| v <= MAX_SECONDARY)
        .ok_or_else(|| Error::InvalidArgument(format!("n^(k-1) exceeds {MAX_SECONDARY} for n = {n}, k = {k}")))?;

    let mut warnings = Vec::new();
    if !(k_nf < n_k) {
        warnings.push(format!("K_nf = {k_nf} is not below N_k = {n_k}"));
    }
    if !(n_k < k_ns) {
        warnings.push(format!("N_k = {n_k} is not below K_ns = {k_ns}"));
    }
    for w in &warnings {
        info!("{w}");
    }
    Ok(SubintervalHierarchy {
        t_total,
        n,
        k,
        n_k,
        k_nf,
        k_ns,
        warnings,
    })
}

impl SubintervalHierarchy {
    pub fn t_total(&self) -> f64 {
        self.t_total
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Secondary subintervals per primary step.
    pub fn n_k(&self) -> usize {
        self.n_k
    }

    pub fn k_nf(&self) -> usize {
        self.k_nf
    }

    pub fn k_ns(&self) -> usize {
        self.k_ns
    }

    pub fn h(&self) -> f64 {
        self.t_total / self.n as f64
    }

    pub fn h_bar(&self) -> f64 {
        self.t_total / (self.n * self.n_k) as f64
    }

    /// `t_i = i h`.
    pub fn primary_time(&self, i: usize) -> f64 {
        self.t_total * i as f64 / self.n as f64
    }

    /// `t_{i,m} = t_i + m h_bar`, computed from the integer index to avoid drift.
    pub fn secondary_time(&self, i: usize, m: usize) -> f64 {
        self.t_total * (i * self.n_k + m) as f64 / (self.n * self.n_k) as f64
    }

    /// Ordering `K_nf < N_k < K_ns` violations, if any.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Copy with a different primary count (same depth and node counts).
    pub fn with_n(&self, n: usize) -> Result<Self> {
        build_hierarchy(self.t_total, n, self.k, self.k_nf, self.k_ns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_lengths() {
        let h = build_hierarchy(1.0, 4, 2, 2, 8).unwrap();
        assert_eq!((h.h(), h.n_k(), h.h_bar()), (0.25, 4, 1.0 / 16.0));
        let h = build_hierarchy(1.0, 4, 1, 4, 16).unwrap();
        assert_eq!((h.n_k(), h.h_bar()), (1, h.h()));
        let h = build_hierarchy(2.0, 3, 3, 4, 16).unwrap();
        assert!((h.h_bar() - 2.0 / 27.0).abs() < 1e-16);
    }

    #[test]
    fn times_reconstruct() {
        let h = build_hierarchy(1.0, 3, 2, 2, 8).unwrap();
        assert_eq!(h.secondary_time(1, 0), h.primary_time(1));
        assert_eq!(h.secondary_time(2, 3), h.primary_time(3));
        assert!((h.secondary_time(1, 2) - (h.h() + 2.0 * h.h_bar())).abs() < 1e-15);
        assert_eq!(h.primary_time(3), 1.0);
    }

    #[test]
    fn ordering_warnings() {
        assert!(build_hierarchy(1.0, 4, 2, 2, 8).unwrap().warnings().is_empty());
        assert_eq!(build_hierarchy(1.0, 4, 2, 4, 4).unwrap().warnings().len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_hierarchy(1.0, 1, 1, 4, 16).is_err());
        assert!(build_hierarchy(1.0, 2, 0, 4, 16).is_err());
        assert!(build_hierarchy(1.0, 2, 1, 1, 16).is_err());
        assert!(build_hierarchy(0.0, 2, 1, 4, 16).is_err());
        assert!(build_hierarchy(1.0, 1000, 5, 4, 16).is_err());
    }
}
