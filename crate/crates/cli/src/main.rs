use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "antipodes",
    version,
    about = "Antipode and neighbor pair counting lab"
)]
struct Cli {
    /// Cap on worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
enum Command {
    /// Write a generated point set (or the star metric table).
    Generate(GenerateArgs),
    /// Count neighbor and antipode pairs in a point file.
    Count(CountArgs),
    /// Run the certificate chain on a planar point file.
    Bound(BoundArgs),
    /// Two-annuli lens geometry for a gap d.
    Lens(LensArgs),
    /// Common-neighbor profile of a box graph file.
    Profile(ProfileArgs),
    /// Count a generator family over a list of ε.
    Sweep(SweepArgs),
    /// Fit the ratio exponent of a sweep CSV.
    Fit(FitArgs),
    /// Simulated annealing for low neighbor/antipode ratios.
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum FamilyArg {
    Circle,
    Reuleaux,
    Polygon,
    SphereD,
    OriginPlusCap,
    TwoClusters,
    RandomDisk,
    /// Star metric; written as a distance table.
    Star,
}

#[derive(Args, Debug, Serialize, Clone)]
struct GenSpecArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Polygon side count (even); derived from ε when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// Ambient dimension for sphere_d and origin_plus_cap.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    spec: GenSpecArgs,
    #[arg(long)]
    eps: Option<f64>,
    /// Rescale to diameter exactly 1 about the centroid.
    #[arg(long)]
    normalize: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Engine {
    Brute,
    Grid,
}

#[derive(Args, Debug, Serialize)]
struct CountArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Neighbor threshold; antipodes are pairs at distance ≥ 1 − ε.
    #[arg(long, required_unless_present = "metric")]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value = "grid")]
    engine: Engine,
    /// Treat the input as a metric distance table (needs --near and --far).
    #[arg(long, requires_all = ["near", "far"])]
    metric: bool,
    #[arg(long)]
    near: Option<f64>,
    #[arg(long)]
    far: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct BoundArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    /// Also write the antipodality matrix as a box graph file.
    #[arg(long)]
    emit_matrix: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LensArgs {
    #[arg(long)]
    d: f64,
    #[arg(long)]
    eps: f64,
    /// Also rasterize the enlarged lens and count covering boxes.
    #[arg(long)]
    audit: bool,
}

#[derive(Args, Debug, Serialize)]
struct ProfileArgs {
    /// Box graph file as written by `bound --emit-matrix`.
    #[arg(long)]
    matrix: PathBuf,
    /// Exclusion radius around each box.
    #[arg(long, conflicts_with = "eps")]
    radius: Option<f64>,
    /// Use the default radius 10√ε.
    #[arg(long)]
    eps: Option<f64>,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the profile summary as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Clone)]
struct EpsListArgs {
    /// Comma-separated ε values.
    #[arg(long, value_delimiter = ',', conflicts_with = "eps_dyadic")]
    eps: Option<Vec<f64>>,
    /// `a:b` expands to 2^-a, …, 2^-b.
    #[arg(long)]
    eps_dyadic: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    spec: GenSpecArgs,
    #[command(flatten)]
    #[serde(flatten)]
    eps: EpsListArgs,
    /// Run the certificate chain on every row; exits 2 if any link fails.
    #[arg(long)]
    with_bounds: bool,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Log-log plot of the sweep with its fitted line.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct FitArgs {
    /// Sweep CSV.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum StartArg {
    Circle,
    RandomDisk,
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200_000)]
    proposals: usize,
    #[arg(long, default_value_t = 0.999)]
    cooling: f64,
    #[arg(long, default_value_t = 100)]
    trace_every: usize,
    #[arg(long, value_enum, default_value = "circle")]
    start: StartArg,
    /// Independent chains with seeds seed, seed+1, …; the best is kept.
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Best configuration as a point file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a subcommand that ran to completion.
pub enum Status {
    Ok,
    /// A certificate link failed.
    Violation,
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut config = serde_json::to_value(&cli.command)?;
    config["threads"] = serde_json::json!(cli.threads);
    match &cli.command {
        Command::Generate(a) => commands::generate(a, config),
        Command::Count(a) => commands::count(a, config),
        Command::Bound(a) => commands::bound(a, config),
        Command::Lens(a) => commands::lens(a, config),
        Command::Profile(a) => commands::profile(a, config),
        Command::Sweep(a) => commands::sweep(a, config),
        Command::Fit(a) => commands::fit(a, config),
        Command::Search(a) => commands::search(a, config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => {
            eprintln!("error: certificate chain violated");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
