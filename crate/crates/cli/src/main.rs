use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use deconv_core::estimator::{evaluate, SampleBatch, DEFAULT_K_N};
use deconv_core::harness::{
    estimate_csv, misspecification_ratio, read_data, results_csv, run_experiment, score_curve_csv,
    uniform_grid, workers_from_env, write_text, ExperimentSpec, TargetDensity,
};
use deconv_core::noise::{NoiseKind, NoiseModel};
use deconv_core::selection::{penalty, select, PenaltyConfig, PenaltyMode};
use deconv_core::DeconvError;

/// Adaptive density deconvolution: estimate the density of X from
/// observations Z = X + sigma * eps with known noise density.
#[derive(Debug, Parser)]
#[command(name = "deconv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate a density from a data file and report the selected dimension.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo experiment and write one results row.
    Simulate(SimulateArgs),
    /// MISE ratio between a misspecified and the correct noise model.
    Misspec(MisspecArgs),
    /// Contrast, penalty and criterion for every candidate dimension.
    ScoreCurve(ScoreArgs),
    /// Variance proxy and penalty for every candidate dimension.
    PenaltyCurve(PenaltyArgs),
}

#[derive(Debug, Args)]
struct PenaltyOpts {
    /// Penalty form: practical or theoretical.
    #[arg(long, default_value = "practical")]
    penalty: PenaltyMode,
    /// Constant of the theoretical penalty (must exceed 1).
    #[arg(long, default_value_t = 1.5)]
    a: f64,
}

impl PenaltyOpts {
    fn config(&self) -> PenaltyConfig {
        PenaltyConfig {
            mode: self.penalty,
            a: self.a,
        }
    }
}

#[derive(Debug, Args)]
struct FitOpts {
    /// One observation per line.
    #[arg(long)]
    data: PathBuf,
    /// Noise family: none, laplace or gaussian.
    #[arg(long)]
    noise: NoiseKind,
    /// Noise level.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    sigma: f64,
    /// Coefficients kept on each side of zero.
    #[arg(long, default_value_t = DEFAULT_K_N)]
    kn: usize,
    /// Largest model dimension considered.
    #[arg(long)]
    m_cap: Option<usize>,
    #[command(flatten)]
    penalty: PenaltyOpts,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    fit: FitOpts,
    /// Evaluation grid as lo:hi:points (default: data range padded by 1, 512 points).
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<Grid>,
    /// Estimate CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[command(flatten)]
    fit: FitOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentOpts {
    /// Target density: a-f or its name.
    #[arg(long)]
    density: TargetDensity,
    /// True noise family.
    #[arg(long)]
    noise: NoiseKind,
    #[arg(long)]
    n: usize,
    /// Signal-to-noise ratio 1/sigma^2.
    #[arg(long)]
    s2n: f64,
    #[arg(long, default_value_t = 500)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_K_N)]
    kn: usize,
    #[arg(long)]
    m_cap: Option<usize>,
    #[command(flatten)]
    penalty: PenaltyOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentOpts {
    fn spec(&self) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(
            self.density,
            self.noise,
            self.s2n,
            self.n,
            self.reps,
            self.seed,
        );
        spec.k_n = self.kn;
        spec.m_cap = self.m_cap;
        spec.penalty = self.penalty.config();
        spec
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    exp: ExperimentOpts,
}

#[derive(Debug, Args)]
struct MisspecArgs {
    #[command(flatten)]
    exp: ExperimentOpts,
    /// Noise family the estimator assumes.
    #[arg(long)]
    assumed: NoiseKind,
}

#[derive(Debug, Args)]
struct PenaltyArgs {
    #[arg(long)]
    noise: NoiseKind,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m_cap: Option<usize>,
    #[command(flatten)]
    penalty: PenaltyOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct Grid {
    lo: f64,
    hi: f64,
    points: usize,
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, points] = parts[..] else {
        return Err(format!("expected lo:hi:points, got '{s}'"));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad upper bound '{hi}'"))?;
    let points: usize = points
        .parse()
        .map_err(|_| format!("bad point count '{points}'"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || points < 2 {
        return Err(format!(
            "need finite lo < hi and at least 2 points, got '{s}'"
        ));
    }
    Ok(Grid { lo, hi, points })
}

fn exit_code(err: &DeconvError) -> u8 {
    match err {
        DeconvError::InvalidArgument(_) | DeconvError::InvalidNoise(_) => 2,
        DeconvError::Data { .. } | DeconvError::Io { .. } => 3,
        DeconvError::Overflow { .. }
        | DeconvError::ImaginaryResidue { .. }
        | DeconvError::NoConvergence { .. }
        | DeconvError::NoCandidates(_)
        | DeconvError::TooManyFailures { .. } => 4,
    }
}

fn emit(out: Option<&Path>, content: &str) -> deconv_core::Result<()> {
    match out {
        Some(path) => write_text(path, content),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| DeconvError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            }),
    }
}

fn load(fit: &FitOpts) -> deconv_core::Result<(SampleBatch, NoiseModel)> {
    let model = NoiseModel::new(fit.noise, fit.sigma)?;
    let sample = read_data(&fit.data)?;
    Ok((sample, model))
}

fn estimate(args: &EstimateArgs) -> deconv_core::Result<()> {
    let fit = &args.fit;
    let (sample, model) = load(fit)?;
    let chosen = select(&sample, &model, &fit.penalty.config(), fit.kn, fit.m_cap)?;
    let grid = args.grid.unwrap_or_else(|| {
        let (lo, hi) = sample
            .values()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &z| {
                (lo.min(z), hi.max(z))
            });
        Grid {
            lo: lo - 1.0,
            hi: hi + 1.0,
            points: 512,
        }
    });
    let xs = uniform_grid(grid.lo, grid.hi, grid.points);
    let values = evaluate(&chosen.coefficients, &xs);
    emit(args.out.as_deref(), &estimate_csv(&xs, &values))?;
    let report = format!("selected m = {}", chosen.chosen.m);
    if args.out.is_some() {
        println!("{report}");
    } else {
        eprintln!("{report}");
    }
    Ok(())
}

fn score_curve(args: &ScoreArgs) -> deconv_core::Result<()> {
    let fit = &args.fit;
    let (sample, model) = load(fit)?;
    let chosen = select(&sample, &model, &fit.penalty.config(), fit.kn, fit.m_cap)?;
    emit(args.out.as_deref(), &score_curve_csv(&chosen.scores))?;
    eprintln!("selected m = {}", chosen.chosen.m);
    Ok(())
}

fn simulate(args: &SimulateArgs) -> deconv_core::Result<()> {
    let spec = args.exp.spec();
    let stats = run_experiment(&spec)?;
    if stats.failed > 0 {
        eprintln!("{} of {} replications failed", stats.failed, spec.reps);
    }
    emit(args.exp.out.as_deref(), &results_csv(&[(spec, stats)]))
}

fn misspec(args: &MisspecArgs) -> deconv_core::Result<()> {
    let spec = args.exp.spec().assuming(args.assumed);
    let ratio = misspecification_ratio(&spec, workers_from_env())?;
    let mut csv = String::from("density,noise,assumed_noise,n,s2n,reps,seed,ratio\n");
    writeln!(
        csv,
        "{},{},{},{},{},{},{},{}",
        spec.density.letter(),
        spec.noise,
        args.assumed,
        spec.n,
        spec.s2n,
        spec.reps,
        spec.seed,
        ratio
    )
    .expect("writing to a String cannot fail");
    emit(args.exp.out.as_deref(), &csv)
}

fn penalty_curve(args: &PenaltyArgs) -> deconv_core::Result<()> {
    let model = NoiseModel::new(args.noise, args.sigma)?;
    let cfg = args.penalty.config();
    cfg.validate()?;
    if args.n == 0 {
        return Err(DeconvError::InvalidArgument("n must be at least 1".into()));
    }
    let mut csv = String::from("m,delta1,pen\n");
    for m in model.admissible_dimensions(args.n, args.m_cap) {
        let (Ok(d), Ok(p)) = (model.delta1(m), penalty(&model, m, args.n, &cfg)) else {
            continue;
        };
        writeln!(csv, "{m},{d},{p}").expect("writing to a String cannot fail");
    }
    emit(args.out.as_deref(), &csv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Simulate(a) => simulate(a),
        Command::Misspec(a) => misspec(a),
        Command::ScoreCurve(a) => score_curve(a),
        Command::PenaltyCurve(a) => penalty_curve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("deconv: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
