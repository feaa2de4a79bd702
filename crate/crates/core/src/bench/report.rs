use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::cost::{CostModel, ModelKind};
use super::fit::fit_loglog;
use super::sweep::CostRecord;
use crate::error::{Error, Result};

/// Allowed gap between fitted and predicted exponents.
pub const EXPONENT_TOLERANCE: f64 = 0.05;

/// Fitted growth of one (method, m) cost curve in `1/eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentRow {
    pub method: String,
    pub m: usize,
    pub points: usize,
    /// Slope of predicted cost against `1/eps`, after dividing out `ln(1/eps)`
    /// for models that carry it.
    pub fitted: f64,
    pub predicted: f64,
    pub log_stripped: bool,
    /// Slope of measured queries, when at least three cells have them.
    pub measured: Option<f64>,
}

impl ExponentRow {
    pub fn matches(&self) -> bool {
        (self.fitted - self.predicted).abs() <= EXPONENT_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<ExponentRow>,
    /// Whether the FFT curve is below every quantum curve at `m >= 4`;
    /// `None` when no such comparison is possible.
    pub fft_dominates: Option<bool>,
    pub fft_comparisons: usize,
    pub fft_violations: Vec<(String, usize, f64)>,
    pub notes: Vec<String>,
    curves: BTreeMap<(String, usize), Vec<(f64, Option<f64>, Option<u64>)>>,
}

fn model_for(method: &str) -> Option<ModelKind> {
    match method {
        "cas" | "cas_readout" => Some(ModelKind::CasReadout),
        "osk" => Some(ModelKind::Osk),
        "fft" | "fft_classical" => Some(ModelKind::FftClassical),
        "cas_highdim" => Some(ModelKind::CasHighdim),
        _ => None,
    }
}

fn is_quantum(method: &str) -> bool {
    matches!(model_for(method), Some(ModelKind::CasReadout | ModelKind::Osk | ModelKind::CasHighdim))
}

fn is_fft(method: &str) -> bool {
    model_for(method) == Some(ModelKind::FftClassical)
}

impl Report {
    /// Builds the comparison from sweep or model records; failed cells are ignored.
    pub fn from_records(records: &[CostRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidArgument("no records to report on".into()));
        }
        let mut curves: BTreeMap<(String, usize), Vec<(f64, Option<f64>, Option<u64>)>> = BTreeMap::new();
        for r in records.iter().filter(|r| r.is_ok()) {
            curves
                .entry((r.method.clone(), r.m))
                .or_default()
                .push((r.epsilon, r.predicted_cost, r.measured_queries));
        }
        for pts in curves.values_mut() {
            pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        }

        let mut rows = Vec::new();
        for ((method, m), pts) in &curves {
            let Some(kind) = model_for(method) else { continue };
            let model = CostModel::new(kind, *m as f64);
            let log_stripped = model.has_log_factor();
            let predicted_pts: Vec<(f64, f64)> = pts
                .iter()
                .filter_map(|(e, p, _)| {
                    p.map(|c| {
                        let c = if log_stripped { c / (1.0 / e).ln() } else { c };
                        (1.0 / e, c)
                    })
                })
                .collect();
            let Ok(fit) = fit_loglog(&predicted_pts) else { continue };
            let measured_pts: Vec<(f64, f64)> = pts
                .iter()
                .filter_map(|(e, _, q)| q.filter(|q| *q > 0).map(|q| (1.0 / e, q as f64)))
                .collect();
            rows.push(ExponentRow {
                method: method.clone(),
                m: *m,
                points: predicted_pts.len(),
                fitted: fit.slope,
                predicted: model.predicted_exponent(),
                log_stripped,
                measured: fit_loglog(&measured_pts).ok().map(|f| f.slope),
            });
        }

        let mut fft_comparisons = 0;
        let mut fft_violations = Vec::new();
        for ((_, m), pts) in curves.iter().filter(|((me, m), _)| is_fft(me) && *m >= 4) {
            for (eps, fft_cost, _) in pts {
                let Some(fft_cost) = fft_cost else { continue };
                for ((other, _), opts) in curves.iter().filter(|((o, om), _)| is_quantum(o) && om == m) {
                    if let Some((_, Some(q), _)) = opts.iter().find(|(e, _, _)| e == eps) {
                        fft_comparisons += 1;
                        if !(fft_cost < q) {
                            fft_violations.push((other.clone(), *m, *eps));
                        }
                    }
                }
            }
        }
        let fft_dominates = (fft_comparisons > 0).then(|| fft_violations.is_empty());

        let mut notes = vec![
            "cas curves include the ln(1/eps) factor; exponents are fitted after dividing it out".to_string(),
            "osk (q = 1, gamma = 1) and fft curves carry no log factors".to_string(),
            "measured exponents use query or step counts; wall time is not comparable across methods".to_string(),
        ];
        let hd = CostModel::new(ModelKind::CasHighdim, 8.0);
        let ratio = hd.cost(0.1)? / CostModel::new(ModelKind::CasReadout, 8.0).cost(0.1)?;
        notes.push(format!(
            "cas_highdim at d = 1 scales as m^2 (ratio {ratio:.0} to cas_readout at m = 8), \
             inconsistent with the linear growth of kappa measured in one dimension; both kept as stated"
        ));
        Ok(Self {
            rows,
            fft_dominates,
            fft_comparisons,
            fft_violations,
            notes,
            curves,
        })
    }

    pub fn all_exponents_match(&self) -> bool {
        self.rows.iter().all(ExponentRow::matches)
    }

    /// Writes one `<method>_m<m>.dat` per curve with columns
    /// `epsilon predicted_cost measured_queries` (`NaN` when missing).
    pub fn write_gnuplot(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for ((method, m), pts) in &self.curves {
            let path = dir.join(format!("{method}_m{m}.dat"));
            let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
            writeln!(f, "# epsilon predicted_cost measured_queries")?;
            for (e, p, q) in pts {
                let p = p.map_or("NaN".to_string(), |v| v.to_string());
                let q = q.map_or("NaN".to_string(), |v| v.to_string());
                writeln!(f, "{e} {p} {q}")?;
            }
            f.flush()?;
            written.push(path);
        }
        Ok(written)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Cost exponents in 1/eps")?;
        writeln!(
            f,
            "{:<14} {:>4} {:>6} {:>9} {:>9} {:>9} {:>8}",
            "method", "m", "points", "fitted", "predicted", "measured", "verdict"
        )?;
        for r in &self.rows {
            let measured = r.measured.map_or("-".to_string(), |v| format!("{v:.3}"));
            let tag = if r.log_stripped { " (+log)" } else { "" };
            writeln!(
                f,
                "{:<14} {:>4} {:>6} {:>9.4} {:>9.4} {:>9} {:>8}{tag}",
                r.method,
                r.m,
                r.points,
                r.fitted,
                r.predicted,
                measured,
                if r.matches() { "match" } else { "MISMATCH" },
            )?;
        }
        writeln!(f)?;
        match self.fft_dominates {
            Some(true) => writeln!(
                f,
                "FFT baseline below every quantum curve at m >= 4 ({} comparisons): neither quantum method outperforms it",
                self.fft_comparisons
            )?,
            Some(false) => {
                writeln!(f, "FFT baseline NOT dominant at:")?;
                for (method, m, e) in &self.fft_violations {
                    writeln!(f, "  {method} m={m} eps={e}")?;
                }
            }
            None => writeln!(f, "FFT comparison not evaluated (needs fft and quantum curves at m >= 4)")?,
        }
        writeln!(f)?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
