use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sympsurf::report::Report;
use sympsurf::scenario::{self, Kind, RunOptions, Scenario, ScenarioError};
use sympsurf::suite::{self, SuiteName, SuiteOptions};

#[derive(Parser)]
#[command(name = "sympsurf", version, about = "Run symplectic surface scenarios and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Write the JSON report to this path (`-` for stdout instead of text).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify linear planes against the reference planes.
    Planes { path: PathBuf },
    /// Run a perturbation pipeline or node resolution.
    Perturb { path: PathBuf },
    /// Check a Kähler neighborhood chart.
    Kahler { path: PathBuf },
    /// Evaluate a divisor on an intersection lattice.
    Divisor { path: PathBuf },
    /// Second homology of a Seifert bundle.
    Seifert { path: PathBuf },
    /// Run a verification suite: lemmas, pipelines, kahler, homology or all.
    Suite { name: String },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SYMPSURF_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SYMPSURF_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Report, ScenarioError> {
    let opts = RunOptions {
        seed: cli.flags.seed,
        resolution: cli.flags.resolution,
        tolerance: cli.flags.tolerance,
    };
    let (kind, path) = match &cli.command {
        Command::Suite { name } => {
            let name: SuiteName = name.parse().map_err(ScenarioError::Schema)?;
            let d = SuiteOptions::default();
            let so = SuiteOptions {
                seed: opts.seed.unwrap_or(d.seed),
                resolution: opts.resolution.unwrap_or(d.resolution),
                tolerance: opts.tolerance.unwrap_or(d.tolerance),
            };
            return Ok(suite::run_suite(name, &so));
        }
        Command::Planes { path } => (Kind::Planes, path),
        Command::Perturb { path } => (Kind::Perturb, path),
        Command::Kahler { path } => (Kind::Kahler, path),
        Command::Divisor { path } => (Kind::Divisor, path),
        Command::Seifert { path } => (Kind::Seifert, path),
    };
    let s = Scenario::load(path)?;
    if s.kind != kind {
        return Err(ScenarioError::Schema(format!(
            "{} holds a {} scenario, not {}",
            path.display(),
            s.kind.as_str(),
            kind.as_str()
        )));
    }
    scenario::run(&s, &opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("sympsurf: {e}");
        return ExitCode::from(2);
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sympsurf: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match &cli.flags.json {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            print!("{}", report.to_text());
            if let Err(e) = std::fs::write(p, report.to_json()) {
                eprintln!("sympsurf: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.to_text()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
