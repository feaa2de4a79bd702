//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Set `HEATQ_BLESS=1` to regenerate the golden sweep CSV.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heatq::bench::{fit_loglog, log_grid, model_records, run_sweep, write_records, Report, SweepConfig};
use heatq::conditioning::{heat_kappa_study, PowerSettings};
use heatq::grid::{
    analytic_solution, assemble_block_system, heat_in_region, march_explicit, solve_block_direct, Boundary, Grid1D,
    HeatProblem, InitialProfile, Region,
};
use heatq::osk::{build_hierarchy, osk_solve, MeanEstimator, SmoothnessParams};
use heatq::qae::{build_mean_oracle, heat_readout, prepare_state, qae_error_bound, InjectedState, Readout};
use heatq::qlsp::{
    adiabatic_error_bound, adiabatic_evolve, chebyshev_filter, dolph_chebyshev_weights, main_lobe_half_width,
    window_response, HamiltonianPath, WalkOperator, WalkSchedule,
};
use heatq::statevector::StateVector;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn kappa_scaling() -> Outcome {
    let fit = ok(heat_kappa_study(&[4, 8, 16, 32, 64], 0.25, &PowerSettings::default()))?;
    let spread = fit.norm_spread();
    ensure!((0.85..=1.15).contains(&fit.slope), "slope {:.4}", fit.slope);
    ensure!(fit.r_squared >= 0.98, "r^2 {:.5}", fit.r_squared);
    ensure!(spread <= 3.0, "norm spread {spread:.3}");
    Ok(format!("slope {:.4}, r^2 {:.5}, ||A|| spread {spread:.3}", fit.slope, fit.r_squared))
}

fn block_equals_marching() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = rng.gen_range(1..=32);
        let n = rng.gen_range(1..=32);
        let lambda = rng.gen_range(0.01..=0.5);
        let dx = 1.0 / (m + 1) as f64;
        let grid = ok(Grid1D::new(0.0, 1.0, m, n as f64 * lambda * dx * dx, n))?;
        let u0: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bnd = Boundary::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let p = ok(HeatProblem::unnormalized(grid, 1.0, u0, bnd))?;
        let direct = ok(solve_block_direct(&ok(assemble_block_system(&p))?))?;
        let march = ok(march_explicit(&p))?;
        worst = worst.max(direct.max_abs_diff(&march));
    }
    ensure!(worst <= 1e-12, "max difference {worst:e}");
    Ok(format!("max difference {worst:.2e} over 20 instances"))
}

fn spatial_convergence() -> Outcome {
    let lambda = 0.25;
    let t = 0.0625;
    let mut errs = Vec::new();
    for m in [7usize, 15, 31, 63] {
        let dx = 1.0 / (m + 1) as f64;
        let n = (t / (lambda * dx * dx)).round() as usize;
        let grid = ok(Grid1D::new(0.0, 1.0, m, t, n))?;
        let u0 = ok(InitialProfile::Sine(1).sample(&grid))?;
        let p = ok(HeatProblem::unnormalized(grid, 1.0, u0, Boundary::zero()))?;
        let u = ok(march_explicit(&p))?;
        let exact = ok(analytic_solution(1, 1.0, &grid, t))?;
        errs.push(u.final_slice().iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    ensure!(ratios.iter().all(|r| (3.4..=4.6).contains(r)), "ratios {ratios:?}");
    Ok(format!("error ratios {:.3} {:.3} {:.3}", ratios[0], ratios[1], ratios[2]))
}

fn adiabatic_emulation() -> Outcome {
    let sys = ok(heatq::grid::BlockSystem::heat(2, 2, 0.25))?;
    let path = ok(HamiltonianPath::from_block_system(&sys))?;
    ensure!(path.dim() <= 64, "dilated dimension {}", path.dim());
    let target = ok(path.solution_state())?;
    let mut prev = 0.0;
    let mut line = Vec::new();
    for t in [8usize, 16, 32, 64, 128] {
        let sch = ok(WalkSchedule::new(t, 1.0))?;
        let f = ok(adiabatic_evolve(&path, &sch, &path.initial_state()))?.state.fidelity(&target);
        let bound = ok(adiabatic_error_bound(&path, &sch))?.bound;
        ensure!(f >= prev - 0.02, "fidelity fell to {f} at T = {t}");
        ensure!(1.0 - f <= 10.0 * bound, "infidelity {} above 10x bound {bound} at T = {t}", 1.0 - f);
        line.push(format!("T={t}:{f:.5}"));
        prev = f;
    }
    ensure!(prev >= 0.99, "final fidelity {prev}");
    Ok(line.join(" "))
}

fn eigenstate_filtering() -> Outcome {
    // Random orthogonal eigenbasis; the wanted component sits at phase 0 and
    // the spurious one well outside the main lobe.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dim = 8;
    let q = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
    let phases = [0.0, 1.2, -0.9, 2.0, 0.7, -1.6, 2.7, -2.2];
    let lobe = main_lobe_half_width(32, 40.0);
    ensure!(phases[1] > lobe, "spurious phase inside main lobe {lobe}");
    let h = &q * DMatrix::from_diagonal(&DVector::from_row_slice(&phases)) * q.transpose();
    let walk = WalkOperator::new(&h, 1.0);
    let good: Vec<f64> = q.column(0).iter().copied().collect();
    let bad: Vec<f64> = q.column(1).iter().copied().collect();
    let mix: Vec<f64> = good.iter().zip(&bad).map(|(g, b)| 0.8f64.sqrt() * g + 0.2f64.sqrt() * b).collect();
    let psi = ok(StateVector::from_real(&mix))?;
    let target = ok(StateVector::from_real(&good))?;

    let w = ok(dolph_chebyshev_weights(32, 40.0))?;
    let out = ok(chebyshev_filter(&psi, &walk, &w))?;
    let fidelity = out.fidelity(&target);
    ensure!(fidelity >= 0.995, "post-filter fidelity {fidelity}");

    // Realized attenuation per eigenphase against |sum_j w_j e^{i j phi}|.
    let total: f64 = w.iter().sum();
    let unit: Vec<f64> = w.iter().map(|v| v / total).collect();
    let probe = ok(StateVector::from_real(&vec![1.0; dim]))?;
    let raw = ok(heatq::qlsp::apply_filter_raw(&probe, &walk, &unit))?;
    let cin = walk.to_eigenbasis(probe.amplitudes());
    let cout = walk.to_eigenbasis(raw.amplitudes());
    let mut worst = 0.0f64;
    for (k, lam) in walk.eigenvalues().iter().enumerate() {
        let expect = window_response(&unit, *lam).norm();
        worst = worst.max((cout[k].norm() / cin[k].norm() - expect).abs());
    }
    ensure!(worst <= 1e-10, "attenuation mismatch {worst:e}");
    Ok(format!("fidelity {fidelity:.6}, attenuation mismatch {worst:.1e}"))
}

fn qae_bound() -> Outcome {
    let mut worst_ratio = 0.0f64;
    for k in 0..=10 {
        let a = k as f64 / 10.0;
        let o = ok(build_mean_oracle(&[a; 4]))?;
        for m in 4..=12 {
            let r = ok(o.estimate(m, Readout::Argmax))?;
            let err = (r.estimate - a).abs();
            let b = qae_error_bound(a, m);
            ensure!(err <= b + 1e-12, "a = {a}, M = {m}: error {err} > {b}");
            worst_ratio = worst_ratio.max(err / b);
        }
    }
    Ok(format!("99 cases, worst error/bound {worst_ratio:.3}"))
}

fn mean_oracle_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=256);
        let g: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let o = ok(build_mean_oracle(&g))?;
        let mass = o.flag_projector().mass(prepare_state(&o).amplitudes()) * o.pad_factor();
        worst = worst.max((mass - g.iter().sum::<f64>() / n as f64).abs());
    }
    ensure!(worst <= 1e-12, "worst deviation {worst:e}");
    Ok(format!("worst deviation {worst:.1e} over 100 vectors"))
}

fn osk_problem() -> Result<HeatProblem, String> {
    let g = ok(Grid1D::new(0.0, 1.0, 8, 0.05, 1))?;
    ok(HeatProblem::from_profile(g, 1.0, &InitialProfile::Sine(1), Boundary::zero()))
}

fn osk_refinement() -> Outcome {
    let p = osk_problem()?;
    let ns = [4usize, 8, 16, 32];
    let mut errs = Vec::new();
    for &n in &ns {
        let h = ok(build_hierarchy(0.05, n, 2, 4, 16))?;
        errs.push(ok(osk_solve(&p, &h, &SmoothnessParams::default(), &MeanEstimator::ExactMean))?.sup_error);
    }
    let violations = errs.windows(2).filter(|w| w[1] > w[0] * 1.05).count();
    ensure!(violations <= 1, "{violations} refinement violations: {errs:?}");
    let pts: Vec<(f64, f64)> = ns.iter().zip(&errs).map(|(n, e)| (*n as f64, *e)).collect();
    let slope = ok(fit_loglog(&pts))?.slope;
    ensure!(slope <= -1.0, "slope {slope}");
    Ok(format!(
        "sup errors {:.2e} {:.2e} {:.2e} {:.2e}, measured slope {slope:.3}",
        errs[0], errs[1], errs[2], errs[3]
    ))
}

fn osk_qae_consistency() -> Outcome {
    let p = osk_problem()?;
    let h = ok(build_hierarchy(0.05, 4, 2, 4, 16))?;
    let params = SmoothnessParams::default();
    let exact = ok(osk_solve(&p, &h, &params, &MeanEstimator::ExactMean))?;
    let qae = ok(osk_solve(&p, &h, &params, &MeanEstimator::qae(12)))?;
    let mut worst = 0.0f64;
    for (i, (a, b)) in qae.trajectory.slices().iter().zip(exact.trajectory.slices()).enumerate() {
        let dev = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let bound = qae.accumulated_bound[i];
        ensure!(dev <= bound, "slice {i}: deviation {dev:e} > bound {bound:e}");
        if bound > 0.0 {
            worst = worst.max(dev / bound);
        }
    }
    Ok(format!(
        "final bound {:.2e}, worst deviation/bound {worst:.3}, {} queries",
        qae.total_bound(),
        qae.queries
    ))
}

fn readout_correctness() -> Outcome {
    let g = ok(Grid1D::with_lambda(0.0, 1.0, 8, 0.02, 1.0, 0.25))?;
    let p = ok(HeatProblem::from_profile(g, 1.0, &InitialProfile::Sine(1), Boundary::zero()))?;
    let traj = ok(march_explicit(&p))?;
    let dx = g.delta_x();
    let u = traj.final_slice();
    let s = ok(InjectedState::new(u))?;
    let left = Region::left_half(8);
    let want = ok(heat_in_region(u, &left, dx))?;
    let got = ok(heat_readout(&s, &left, &s.norms(dx), 0.02, Readout::Argmax))?;
    ensure!((got.estimate - want).abs() <= 0.02, "left half {} vs {want}", got.estimate);

    // Unit total heat: full-domain read-out of the normalized initial slice.
    let s0 = ok(InjectedState::new(traj.slice(0)))?;
    let full = ok(heat_readout(&s0, &Region::full(8), &s0.norms(dx), 0.02, Readout::Argmax))?;
    ensure!((full.estimate - 1.0).abs() <= 0.02, "full domain {}", full.estimate);

    let half = ok(heat_readout(&s, &left, &s.norms(dx), 0.01, Readout::Argmax))?;
    let (q1, q2) = (got.total_queries as i64, half.total_queries as i64);
    ensure!((q2 - 2 * q1).abs() <= 1, "queries {q1} -> {q2}");
    Ok(format!(
        "H_S {:.5} vs {want:.5}, full {:.5}, queries {q1} -> {q2}",
        got.estimate, full.estimate
    ))
}

fn head_to_head() -> Outcome {
    let recs = ok(model_records(&[4, 8, 16], &log_grid(1e-4, 1e-1, 13)))?;
    let report = ok(Report::from_records(&recs))?;
    for row in &report.rows {
        ensure!(
            row.matches(),
            "{} m={}: fitted {:.4} vs {:.4}",
            row.method,
            row.m,
            row.fitted,
            row.predicted
        );
    }
    ensure!(report.fft_dominates == Some(true), "FFT not dominant: {:?}", report.fft_violations);
    let worst = report
        .rows
        .iter()
        .map(|r| (r.fitted - r.predicted).abs())
        .fold(0.0, f64::max);
    Ok(format!(
        "{} curves, worst exponent gap {worst:.1e}, FFT below quantum curves in {} comparisons",
        report.rows.len(),
        report.fft_comparisons
    ))
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sweep_default.csv")
}

fn sweep_csv() -> Result<Vec<u8>, String> {
    let recs = ok(run_sweep(&SweepConfig::default()))?;
    let mut buf = Vec::new();
    ok(write_records(&recs, &mut buf))?;
    Ok(buf)
}

fn sweep_determinism() -> Outcome {
    let first = sweep_csv()?;
    let second = sweep_csv()?;
    ensure!(first == second, "two runs differ");
    let path = golden_path();
    if std::env::var_os("HEATQ_BLESS").is_some() {
        ok(std::fs::write(&path, &first))?;
        return Ok(format!("blessed {} ({} bytes)", path.display(), first.len()));
    }
    let golden = std::fs::read(&path).map_err(|e| format!("{}: {e} (run with HEATQ_BLESS=1)", path.display()))?;
    ensure!(golden == first, "output differs from {}", path.display());
    Ok(format!("{} bytes identical to golden", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 12] = [
        ("kappa grows linearly in m", 60, kappa_scaling),
        ("block solve equals explicit marching", 5, block_equals_marching),
        ("second-order spatial convergence", 10, spatial_convergence),
        ("adiabatic emulation fidelity", 120, adiabatic_emulation),
        ("Dolph-Chebyshev eigenstate filtering", 10, eigenstate_filtering),
        ("amplitude estimation error bound", 30, qae_bound),
        ("mean-oracle flag mass", 5, mean_oracle_identity),
        ("hierarchical integrator refinement", 120, osk_refinement),
        ("integrator with estimated means", 120, osk_qae_consistency),
        ("region heat read-out", 30, readout_correctness),
        ("cost-model head-to-head", 5, head_to_head),
        ("sweep determinism", 60, sweep_determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(d) if elapsed > Duration::from_secs(*budget) => {
                Err(format!("{d}; took {:.1} s, budget {budget} s", elapsed.as_secs_f64()))
            }
            r => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.2} s]", i + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{:.2} s]", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
