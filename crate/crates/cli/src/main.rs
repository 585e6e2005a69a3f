//! `cspursuit`: command-line front end for the greedy sparse-recovery toolkit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cspursuit::{Algorithm, DaiVariant, MatrixEnsemble, SignalDistribution};

mod commands;

use commands::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "cspursuit",
    version,
    about = "CoSaMP / Subspace Pursuit recovery and iteration-bound analysis"
)]
struct Cli {
    /// Worker threads for trial and subset enumeration
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recover a sparse signal from y = A x
    Recover(RecoverArgs),
    /// Restricted isometry constant of a matrix
    Ric(RicArgs),
    /// Decay rates and iteration constants at one delta or on a grid
    Bounds(BoundsArgs),
    /// Bounds table on a uniform delta grid
    Sweep(SweepArgs),
    /// Seeded random recovery trials
    Experiment(ExperimentArgs),
    /// Per-iteration decay and iteration-bound checks on certified instances
    Decay(DecayArgs),
    /// Magnitude-band partition schedule of a signal
    Partition(PartitionArgs),
    /// Delta where the SP bound overtakes the earlier 1.5K/ln(1/rho) bound
    Crossover(CrossoverArgs),
}

#[derive(Debug, Args)]
struct RecoverArgs {
    /// cosamp or sp
    #[arg(long)]
    algorithm: Algorithm,
    /// Matrix CSV (header line `m,n`)
    #[arg(long)]
    matrix: PathBuf,
    /// Measurement vector, one value per line
    #[arg(long)]
    measurements: PathBuf,
    /// Target sparsity K
    #[arg(long)]
    sparsity: usize,
    /// Absolute residual threshold [default: 1e-10 * ||y||]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Iteration budget [default: 6K + 10]
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the per-iteration trace CSV here
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Ground-truth signal; enables missed-energy trace columns
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Estimate output [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RicMethodArg {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Args)]
struct RicArgs {
    /// Matrix CSV (header line `m,n`)
    #[arg(long)]
    matrix: PathBuf,
    /// Subset size K
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum, default_value_t = RicMethodArg::Exact)]
    method: RicMethodArg,
    /// Sampled subsets (monte-carlo)
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Single delta in [0, 1)
    #[arg(long, conflicts_with_all = ["delta_min", "delta_max", "steps"])]
    delta: Option<f64>,
    #[arg(long, requires_all = ["delta_max", "steps"])]
    delta_min: Option<f64>,
    #[arg(long, requires_all = ["delta_min", "steps"])]
    delta_max: Option<f64>,
    #[arg(long, requires_all = ["delta_min", "delta_max"])]
    steps: Option<usize>,
    /// Decay constant in the earlier SP bound: same_rho or dai_rho
    #[arg(long, default_value_t = DaiVariant::SameRho)]
    variant: DaiVariant,
    /// [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    delta_min: f64,
    #[arg(long, default_value_t = 0.49)]
    delta_max: f64,
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// same_rho or dai_rho
    #[arg(long, default_value_t = DaiVariant::SameRho)]
    variant: DaiVariant,
    /// [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Measurements
    #[arg(long)]
    m: usize,
    /// Signal length
    #[arg(long)]
    n: usize,
    /// Sparsity
    #[arg(long)]
    k: usize,
    /// cosamp or sp
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    noise_sigma: f64,
    /// gaussian, flat or geometric:<ratio>
    #[arg(long, default_value_t = SignalDistribution::Gaussian)]
    distribution: SignalDistribution,
    /// gaussian or flat-augmented
    #[arg(long, default_value_t = MatrixEnsemble::Gaussian)]
    ensemble: MatrixEnsemble,
    /// Compute each trial's exact RIC and check the ceil(cK) bound
    #[arg(long)]
    certify: bool,
    /// Absolute residual threshold [default: 1e-10 * ||y||]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Iteration budget [default: 6K + 10]
    #[arg(long)]
    max_iter: Option<usize>,
    /// Per-trial CSV [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON [default: stderr]
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DecayArgs {
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// cosamp or sp
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// gaussian or flat-augmented
    #[arg(long, default_value_t = MatrixEnsemble::Gaussian)]
    ensemble: MatrixEnsemble,
    /// gaussian, flat or geometric:<ratio>
    #[arg(long, default_value_t = SignalDistribution::Gaussian)]
    distribution: SignalDistribution,
    /// Report JSON [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PartitionArgs {
    /// Signal vector, one value per line
    #[arg(long)]
    signal: PathBuf,
    /// delta_4K, e.g. 0.4472135955
    #[arg(long)]
    delta: f64,
    /// [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CrossoverArgs {
    /// same_rho or dai_rho
    #[arg(long, default_value_t = DaiVariant::SameRho)]
    variant: DaiVariant,
    /// [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Recover(a) => commands::recover(a),
        Command::Ric(a) => commands::ric(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::Decay(a) => commands::decay(a),
        Command::Partition(a) => commands::partition(a),
        Command::Crossover(a) => commands::crossover(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(1);
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: --jobs {}: {e}", cli.jobs);
            return ExitCode::from(1);
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
