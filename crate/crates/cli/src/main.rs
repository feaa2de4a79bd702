use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use heatq::bench::{log_grid, model_records, read_records, run_sweep, write_records, Report, SweepConfig};
use heatq::conditioning::{heat_kappa_study, PowerSettings};
use heatq::grid::{assemble_block_system, march_explicit, march_spectral, solve_block_direct, ProblemConfig};
use heatq::osk::{build_hierarchy, osk_solve, MeanEstimator, SmoothnessParams};
use heatq::qae::{build_mean_oracle, Readout};
use heatq::qlsp::{run_qlsp, QlspConfig};

#[derive(Parser)]
#[command(name = "heatq", version, about = "Heat-equation solvers: classical, emulated quantum, and cost benchmarks")]
struct Cli {
    /// Seed for every stochastic read-out; without it read-outs take the most likely outcome.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve with a classical method and write the `t,x,u` trajectory.
    SolveClassical {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value_t = ClassicalMethod::Explicit)]
        method: ClassicalMethod,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emulate the adiabatic linear-system solve of a small heat problem.
    SolveQlsp {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n_steps: usize,
        #[arg(long, default_value_t = 0.25)]
        lambda: f64,
        #[arg(long, default_value = "sine:1")]
        initial: String,
        /// Comma-separated adiabatic step counts.
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64, 128])]
        walk_steps: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        dt_walk: f64,
        #[arg(long, default_value_t = 32)]
        filter_length: usize,
        #[arg(long, default_value_t = 40.0)]
        sidelobe_db: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hierarchical Taylor/quadrature integration with exact or estimated means.
    SolveOsk {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Primary subintervals.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Hierarchy depth.
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        knf: usize,
        #[arg(long, default_value_t = 16)]
        kns: usize,
        #[arg(long, value_enum, default_value_t = EstimatorKind::Exact)]
        estimator: EstimatorKind,
        #[arg(long, default_value_t = 10)]
        qae_ancillas: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Condition numbers of heat block systems and their growth in m.
    KappaStudy {
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 32, 64])]
        m: Vec<usize>,
        #[arg(long, default_value_t = 0.25)]
        lambda: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Amplitude-estimate the mean of values in [0, 1].
    EstimateMean {
        /// Comma-separated samples.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Phase ancillas; derived from --epsilon when absent.
        #[arg(long)]
        ancillas: Option<u32>,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Run a cost sweep and write its records as CSV.
    Sweep {
        /// TOML sweep description; defaults apply when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Include wall time (breaks byte-for-byte reproducibility).
        #[arg(long)]
        wall_time: bool,
    },
    /// Fit cost exponents and compare against the FFT baseline.
    Report {
        /// Sweep CSV; without it the pure cost models are evaluated.
        #[arg(long)]
        input: Option<PathBuf>,
        /// m values for model evaluation.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16])]
        m: Vec<usize>,
        #[arg(long)]
        gnuplot_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// TOML problem description; overrides the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    t_final: f64,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long, default_value = "spike")]
    initial: String,
}

impl ProblemArgs {
    fn config(&self) -> Result<ProblemConfig> {
        if let Some(path) = &self.config {
            return load_config(path, ProblemConfig::load);
        }
        Ok(ProblemConfig {
            x0: 0.0,
            x_end: 1.0,
            m: self.m,
            alpha: self.alpha,
            t_final: self.t_final,
            n_steps: self.n_steps,
            lambda: self.lambda,
            initial: self.initial.clone(),
            samples: None,
            boundary: [0.0, 0.0],
            normalize: true,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassicalMethod {
    Explicit,
    Block,
    Fft,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorKind {
    Exact,
    Qae,
}

/// Outcome that maps to exit code 1 without being an error.
struct PartialFailure;

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Any failure to read or parse a config file is a usage error.
fn load_config<T>(path: &Path, load: impl FnOnce(&Path) -> heatq::Result<T>) -> Result<T> {
    load(path).map_err(|e| heatq::Error::Config(format!("{}: {e}", path.display())).into())
}

fn readout(seed: Option<u64>) -> Readout {
    seed.map_or(Readout::Argmax, Readout::Sample)
}

fn run(cli: Cli) -> Result<Option<PartialFailure>> {
    match cli.command {
        Command::SolveClassical { problem, method, output } => {
            let p = problem.config()?.build()?;
            let traj = match method {
                ClassicalMethod::Explicit => march_explicit(&p)?,
                ClassicalMethod::Block => solve_block_direct(&assemble_block_system(&p)?)?,
                ClassicalMethod::Fft => march_spectral(&p)?,
            };
            traj.write_csv(sink(output.as_deref())?)?;
        }
        Command::SolveQlsp {
            m,
            n_steps,
            lambda,
            initial,
            walk_steps,
            dt_walk,
            filter_length,
            sidelobe_db,
            output,
        } => {
            let config = QlspConfig {
                m,
                n_steps,
                lambda,
                profile: initial.parse()?,
                walk_steps,
                dt_walk,
                filter_length,
                sidelobe_db,
                ..QlspConfig::default()
            };
            let out = run_qlsp(&config)?;
            let mut w = sink(output.as_deref())?;
            writeln!(w, "T,fidelity,bound,gap_min,walk_steps")?;
            for r in &out.rows {
                writeln!(w, "{},{},{},{},{}", r.steps, r.fidelity, r.bound, r.gap_min, r.walk_steps)?;
            }
            writeln!(w)?;
            writeln!(w, "x,u_hat")?;
            for (x, u) in out.positions.iter().zip(&out.final_slice) {
                writeln!(w, "{x},{u}")?;
            }
            w.flush()?;
            log::info!(
                "filtered fidelity {} after {} extra walk steps",
                out.filtered_fidelity,
                out.filter_walk_steps
            );
        }
        Command::SolveOsk {
            problem,
            n,
            k,
            knf,
            kns,
            estimator,
            qae_ancillas,
            output,
        } => {
            let p = problem.config()?.build()?;
            let hierarchy = build_hierarchy(p.grid().t_final(), n, k, knf, kns)?;
            let estimator = match estimator {
                EstimatorKind::Exact => MeanEstimator::ExactMean,
                EstimatorKind::Qae => MeanEstimator::Qae {
                    ancillas: qae_ancillas,
                    readout: readout(cli.seed),
                },
            };
            let report = osk_solve(&p, &hierarchy, &SmoothnessParams::default(), &estimator)?;
            for w in &report.warnings {
                log::warn!("{w}");
            }
            let mut w = sink(output.as_deref())?;
            report.trajectory.write_csv(&mut w)?;
            writeln!(w)?;
            writeln!(w, "n,k,sup_error,queries")?;
            writeln!(w, "{n},{k},{},{}", report.sup_error, report.queries)?;
            w.flush()?;
        }
        Command::KappaStudy { m, lambda, output } => {
            let fit = heat_kappa_study(&m, lambda, &PowerSettings::default())?;
            let mut w = sink(output.as_deref())?;
            writeln!(w, "m,norm_A,sigma_min,kappa")?;
            for s in &fit.samples {
                writeln!(w, "{},{},{},{}", s.m, s.norm_a, s.sigma_min, s.kappa)?;
            }
            writeln!(
                w,
                "# slope={} intercept={} r_squared={} norm_spread={}",
                fit.slope,
                fit.intercept,
                fit.r_squared,
                fit.norm_spread()
            )?;
            w.flush()?;
        }
        Command::EstimateMean {
            values,
            ancillas,
            epsilon,
        } => {
            let oracle = build_mean_oracle(&values)?;
            let r = match ancillas {
                Some(a) => oracle.estimate(a, readout(cli.seed))?,
                None => oracle.estimate_bounded(epsilon, readout(cli.seed))?,
            };
            println!("estimate,bound,exact_mean,ancillas,queries");
            println!("{},{},{},{},{}", r.estimate, r.bound, oracle.mean(), r.ancillas, r.queries);
        }
        Command::Sweep {
            config,
            output,
            wall_time,
        } => {
            let mut cfg = match &config {
                Some(p) => load_config(p, SweepConfig::load)?,
                None => SweepConfig::default(),
            };
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            cfg.record_wall_time |= wall_time;
            let records = run_sweep(&cfg)?;
            let target = output.or_else(|| cfg.output.clone());
            write_records(&records, sink(target.as_deref())?)?;
            if let Some(dir) = &cfg.gnuplot_dir {
                Report::from_records(&records)?.write_gnuplot(dir)?;
            }
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            if failed > 0 {
                eprintln!("{failed} sweep cell(s) failed");
                return Ok(Some(PartialFailure));
            }
        }
        Command::Report { input, m, gnuplot_dir } => {
            let records = match &input {
                Some(p) => read_records(File::open(p).with_context(|| format!("opening {}", p.display()))?)?,
                None => model_records(&m, &log_grid(1e-4, 1e-1, 13))?,
            };
            if records.is_empty() {
                bail!(heatq::Error::Config("no records in input".into()));
            }
            let report = Report::from_records(&records)?;
            print!("{report}");
            if let Some(dir) = &gnuplot_dir {
                report.write_gnuplot(dir)?;
            }
        }
    }
    Ok(None)
}

/// Invalid input (exit 2) versus runtime failure (exit 1).
fn is_usage_error(err: &anyhow::Error) -> bool {
    use heatq::Error as E;
    err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<E>(),
            Some(
                E::Config(_)
                    | E::InvalidArgument(_)
                    | E::InvalidGrid(_)
                    | E::InvalidProblem(_)
                    | E::EpsilonOutOfRange(_)
                    | E::AncillaCount(_)
                    | E::OutOfUnitRange { .. }
                    | E::TooFewPoints { .. }
            )
        )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(PartialFailure)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
