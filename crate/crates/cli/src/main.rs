//! `degrank`: generate graphs, sample them, estimate parameters and degree
//! ranks, and evaluate estimators against exact ranks.

mod commands;
mod config;
mod source;

use clap::{Args, Parser, Subcommand};
use degrank::params::NetworkKind;
use degrank::{Method, SamplingMethod};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "degrank", version, about = "Degree-rank estimation from graph samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic graph and write it as an edge list plus binary cache.
    Generate {
        #[command(subcommand)]
        model: Model,
    },
    /// Convert an edge list into the binary cache format.
    Ingest(IngestArgs),
    /// Estimate network size, degree bounds, average degree and exponent.
    EstimateParams(EstimateParamsArgs),
    /// Draw a sample and write its trace as CSV.
    Sample(SampleArgs),
    /// Estimate the rank of given degrees or nodes.
    Rank(RankArgs),
    /// Run the per-degree evaluation protocol for one or more methods.
    Evaluate(EvaluateArgs),
    /// Evaluate methods over BA graphs of increasing size.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
pub enum Model {
    /// Preferential attachment: each new node links to k existing nodes.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Edge-list output; the cache goes next to it with a `.bin` extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform random graph with a target average degree.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        avg_deg: f64,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
pub struct SeedArg {
    /// Base seed. Falls back to DEGRANK_SEED, then 0.
    #[arg(long, env = "DEGRANK_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct GraphArg {
    /// Edge list, binary cache, or generator spec `ba:N:K[:SEED]` / `er:N:AVG[:SEED]`.
    #[arg(long)]
    pub graph: String,
}

#[derive(Args)]
pub struct IngestArgs {
    pub input: PathBuf,
    /// Defaults to the input path with a `.bin` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Settings of the walk-based parameter pipeline.
#[derive(Args, Clone)]
pub struct EstimationArgs {
    /// `real` fixes the minimum degree at 1; `synthetic` uses the sample minimum.
    #[arg(long, default_value = "real")]
    pub network_kind: NetworkKind,
    /// Minimum index gap between collision pairs, as a fraction of walk length.
    #[arg(long, default_value_t = 0.025)]
    pub min_gap: f64,
    /// Minimum index gap between collision pairs, in steps.
    #[arg(long, default_value_t = 10)]
    pub min_gap_steps: usize,
    /// Fixed smoothing constant instead of the pilot-walk choice.
    #[arg(long)]
    pub smoothing_c: Option<f64>,
    /// Walks per estimate; results are averaged.
    #[arg(long, default_value_t = 10)]
    pub repetitions: usize,
    /// Walk length; defaults to the sample size (at least 100).
    #[arg(long)]
    pub walk_length: Option<usize>,
    /// Count only exact revisits in the size estimate.
    #[arg(long)]
    pub no_neighbor_collisions: bool,
}

#[derive(Args, Clone)]
pub struct ParamArgs {
    /// `actual`, `estimated`, or a JSON file written by `estimate-params`;
    /// `evaluate` also accepts `both`.
    #[arg(long, default_value = "estimated")]
    pub params: String,
    /// Override the network size used by the estimators.
    #[arg(long)]
    pub size: Option<f64>,
    #[command(flatten)]
    pub estimation: EstimationArgs,
}

#[derive(Args, Clone, Copy)]
pub struct SizeArgs {
    /// Sample size as a fraction of the node count.
    #[arg(long, default_value_t = 0.01)]
    pub fraction: f64,
    /// Absolute sample size; overrides --fraction.
    #[arg(long)]
    pub sample_size: Option<usize>,
}

#[derive(Args)]
pub struct EstimateParamsArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[command(flatten)]
    pub size: SizeArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    /// JSON output; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long)]
    pub method: SamplingMethod,
    #[command(flatten)]
    pub size: SizeArgs,
    /// Smoothing constant for `smoothed` walks.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Start node (original id) for walks; uniform over nodes with an edge otherwise.
    #[arg(long)]
    pub start: Option<u64>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long)]
    pub method: Method,
    /// Degrees to rank (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub degree: Vec<usize>,
    /// Nodes to rank, by original id (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub node: Vec<u64>,
    /// File with one node id per line (first column; `#` comments and a
    /// non-numeric header are skipped).
    #[arg(long)]
    pub batch: Option<PathBuf>,
    /// Add exact ranks and errors.
    #[arg(long)]
    pub with_truth: bool,
    /// Round estimates to whole ranks.
    #[arg(long)]
    pub round: bool,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub size: SizeArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, value_delimiter = ',', default_value = "pl,us,mh,rw")]
    pub methods: Vec<Method>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 0.01)]
    pub fraction: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Directory for per-method reports and the summary.
    #[arg(long, default_value = "report")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Node counts (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "100000,200000,300000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_value = "rw")]
    pub methods: Vec<Method>,
    /// `actual` or `estimated`.
    #[arg(long, default_value = "estimated")]
    pub params: String,
    #[arg(long, default_value_t = 0.01)]
    pub fraction: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate { model } => commands::generate(model),
        Command::Ingest(args) => commands::ingest(args),
        Command::EstimateParams(args) => commands::estimate_params(args),
        Command::Sample(args) => commands::sample(args),
        Command::Rank(args) => commands::rank(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
