//! `qmix`: curves, verification runs, averages and violation searches for
//! mixtures of random qubit states.
//!
//! Data goes to `--out` (or stdout); every invocation also emits a run
//! manifest, written to `<out>.manifest.json` next to the data file or to
//! stderr when the data went to stdout. Exit codes: 0 success or pass,
//! 1 usage or contract error, 2 expected result absent (a failed
//! verification, a search without violations), 3 numerical failure.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "qmix", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a closed-form density over its full domain
    Density(DensityArgs),
    /// Sample an ensemble and KS-test it against the closed-form law
    Verify(VerifyArgs),
    /// Compute one average by closed form, quadrature, or Monte Carlo
    Averages(AveragesArgs),
    /// Scan random triples for triangle-inequality violations
    SearchViolations(SearchArgs),
    /// Sweep the mixing weight and tabulate both output entropies
    Gsweep(GsweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KindArg {
    /// Output eigenvalues of the equiprobable mixture (needs --mu, --nu)
    LambdaEqui,
    /// Output eigenvalues of the quantum mixture (needs --mu, --nu)
    LambdaQadd,
    /// Output Bloch length of the equiprobable mixture (needs --r1, --r2)
    REqui,
    /// Output Bloch length of the quantum mixture (needs --r1, --r2)
    RQadd,
    /// Angle between two independent uniform directions
    Angle,
    /// Larger eigenvalue of one Hilbert-Schmidt random state
    Maxeig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WhichArg {
    EntropyEqui,
    EntropyQadd,
    Fidelity2,
    Page,
    EntropyMeanN,
    CoherenceN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    Quadrature,
    Mc,
    Exact,
}

/// Distribution parameters; which ones a kind needs is checked per command.
#[derive(Debug, Clone, Copy, Args, Serialize)]
struct LawParams {
    /// Smaller eigenvalue of the first input orbit, in [0, 1/2]
    #[arg(long)]
    mu: Option<f64>,
    /// Smaller eigenvalue of the second input orbit, in [0, 1/2]
    #[arg(long)]
    nu: Option<f64>,
    /// Bloch radius of the first input orbit, in [0, 1]
    #[arg(long)]
    r1: Option<f64>,
    /// Bloch radius of the second input orbit, in [0, 1]
    #[arg(long)]
    r2: Option<f64>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[command(flatten)]
    params: LawParams,
    /// Uniform grid points across the domain; support edges are inserted
    /// as exact extra abscissas
    #[arg(long, default_value_t = 513)]
    grid: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recorded in the manifest; the curve itself is deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[command(flatten)]
    params: LawParams,
    /// Override mu for the sampler only (negative control)
    #[arg(long)]
    sample_mu: Option<f64>,
    /// Override nu for the sampler only (negative control)
    #[arg(long)]
    sample_nu: Option<f64>,
    /// Override r1 for the sampler only (negative control)
    #[arg(long)]
    sample_r1: Option<f64>,
    /// Override r2 for the sampler only (negative control)
    #[arg(long)]
    sample_r2: Option<f64>,
    /// Number of draws; at least 10^4
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AveragesArgs {
    #[arg(long, value_enum)]
    which: WhichArg,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Monte Carlo sample count
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo worker threads; defaults to available parallelism
    #[arg(long)]
    workers: Option<usize>,
    /// Subsystem dimension for --which page
    #[arg(long)]
    m: Option<u64>,
    /// Environment dimension for --which page, or the number of averaged
    /// states for --which entropy-mean-n / coherence-n
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_enum, required_unless_present = "check_triple")]
    mode: Option<ModeArg>,
    #[arg(long, required_unless_present = "check_triple")]
    n_triples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to available parallelism. The result is
    /// the same for every worker count
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replay one triple given as nine floats (three Bloch vectors) and
    /// report its triangle deficits instead of searching
    #[arg(
        long,
        num_args = 9,
        value_name = "X",
        allow_negative_numbers = true,
        conflicts_with_all = ["mode", "n_triples"]
    )]
    check_triple: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct GsweepArgs {
    /// Bloch radius of the first input
    #[arg(long)]
    r1: f64,
    /// Bloch radius of the second input
    #[arg(long)]
    r2: f64,
    /// Angle between the inputs, in [0, pi]
    #[arg(long)]
    theta: f64,
    /// Number of weight grid points including both endpoints
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recorded in the manifest; the sweep itself is deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qmix_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    /// A documented postcondition of the command failed numerically.
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Json(_) => 1,
            CliError::Core(qmix_core::Error::NumericalFailure { .. }) => 3,
            CliError::Core(_) => 1,
            CliError::Postcondition(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap uses exit code 2 for usage errors; this tool reserves 2
            // for "expected result absent", so remap usage to 1
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Density(args) => commands::density(args),
        Command::Verify(args) => commands::verify(args),
        Command::Averages(args) => commands::averages(args),
        Command::SearchViolations(args) => commands::search_violations(args),
        Command::Gsweep(args) => commands::gsweep(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
