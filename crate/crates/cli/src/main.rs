//! `fbcomp`: simulate the free-boundary competition model, compute
//! semi-wave speed constants, bisect the sharp spreading threshold, and
//! sweep phase diagrams.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::Scenario;
use std::fmt;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "fbcomp",
    version,
    about = "Free-boundary competition model: invasion fronts, spreading thresholds, and speeds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write trajectory, summary, and manifest
    Simulate(SimulateArgs),
    /// Semi-wave boundary slopes and the speed constant k0
    Semiwave(SemiwaveArgs),
    /// Bisect the sharp Stefan-coefficient threshold mu*
    Threshold(ThresholdArgs),
    /// Classify a (mu, h0) grid into a phase diagram
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario config file (see docs/config.md)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario: superior-baseline, inferior-baseline, scalar-logistic
    #[arg(long)]
    scenario: Option<String>,
    /// Override the Stefan coefficient mu
    #[arg(long)]
    mu: Option<f64>,
    /// Override the initial front radius h0
    #[arg(long)]
    h0: Option<f64>,
    /// Override the horizon t_end
    #[arg(long)]
    horizon: Option<f64>,
    /// Output directory (default: fbcomp_run, or the config's `out`)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Comma-separated times at which to dump field snapshots
    #[arg(long, value_delimiter = ',')]
    snapshot: Vec<f64>,
}

#[derive(Args)]
struct SemiwaveArgs {
    #[arg(short, default_value_t = 1.0)]
    a: f64,
    #[arg(short, default_value_t = 1.0)]
    b: f64,
    #[arg(short, default_value_t = 1.0)]
    d: f64,
    /// Solve mu U'(0) = k for the speed constant k0
    #[arg(long, conflicts_with = "table")]
    mu: Option<f64>,
    /// Emit a (k, slope0) table over [0, 2 sqrt(ad)) instead
    #[arg(long)]
    table: bool,
    /// Number of table rows
    #[arg(short = 'n', long, default_value_t = 20)]
    rows: usize,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// mu bracket as lo:hi (lo must classify Vanishing, hi Spreading)
    #[arg(long, default_value = "0.05:20")]
    bracket: String,
    /// Relative bracket-width tolerance on mu*
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// mu grid as lo:hi:n
    #[arg(long)]
    mu_grid: Option<String>,
    /// h0 grid as lo:hi:n
    #[arg(long)]
    h0_grid: Option<String>,
    /// Concurrent workers (each point is one isolated run)
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad config file or flag semantics (exit 2).
    Config(String),
    /// Solver-side failure (exit 3).
    Solver(fbcomp_core::Error),
    /// I/O failure writing artifacts (exit 3).
    Io(String),
    /// Threshold classification could not be decided (exit 4).
    Inconclusive(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Inconclusive(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 3,
            CliError::Inconclusive(_) => 4,
        }
    }
}

fn resolve_scenario(args: &ScenarioArgs) -> Result<Scenario, CliError> {
    let mut scenario = match (&args.config, &args.scenario) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "pass either --config or --scenario, not both".into(),
            ))
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
            Scenario::parse(&text).map_err(|e| CliError::Config(e.to_string()))?
        }
        (None, Some(name)) => Scenario::from_preset(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown scenario `{name}` (expected one of {:?})",
                fbcomp_core::presets::NAMES
            ))
        })?,
        (None, None) => Scenario::base(),
    };
    if let Some(mu) = args.mu {
        scenario.params.mu = mu;
    }
    if let Some(h0) = args.h0 {
        scenario.params.h0 = h0;
    }
    if let Some(horizon) = args.horizon {
        scenario.grid.t_end = horizon;
    }
    if let Some(out) = &args.out {
        scenario.out = Some(out.clone());
    }
    scenario
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(scenario)
}

fn out_dir(scenario: &Scenario) -> PathBuf {
    scenario
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("fbcomp_run"))
}

fn parse_bracket(spec: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("bracket `{spec}` must be lo:hi with 0 < lo < hi"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo) {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let scenario = resolve_scenario(&args.scenario)?;
            let dir = out_dir(&scenario);
            commands::simulate::run(&scenario, &args.snapshot, &dir)
        }
        Command::Semiwave(args) => commands::semiwave::run(
            args.a,
            args.b,
            args.d,
            args.mu,
            args.table.then_some(args.rows),
        ),
        Command::Threshold(args) => {
            let scenario = resolve_scenario(&args.scenario)?;
            let bracket = parse_bracket(&args.bracket)?;
            if !(args.tol > 0.0) {
                return Err(CliError::Config(format!("tol must be positive, got {}", args.tol)));
            }
            let dir = out_dir(&scenario);
            commands::threshold::run(&scenario, bracket, args.tol, &dir)
        }
        Command::Sweep(args) => {
            let scenario = resolve_scenario(&args.scenario)?;
            let mu_grid = match &args.mu_grid {
                Some(spec) => commands::sweep::parse_grid(spec)?,
                None => vec![scenario.params.mu],
            };
            let h0_grid = match &args.h0_grid {
                Some(spec) => commands::sweep::parse_grid(spec)?,
                None => vec![scenario.params.h0],
            };
            let dir = out_dir(&scenario);
            commands::sweep::run(&scenario, &mu_grid, &h0_grid, args.workers, &dir)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
