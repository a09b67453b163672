//! `kesten`: moment tables, densities, Monte Carlo histograms and a
//! cross-checking verification report.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

/// Seed used when neither `--seed` nor `KESTEN_SEED` is given.
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "kesten",
    version,
    about = "Closed walks on regular trees and the Kesten-McKay law"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moment polynomials m_2n(c) next to walk counts and quadrature.
    Moments(MomentsArgs),
    /// Density of the law on a grid over its support, plus atoms.
    Density(DensityArgs),
    /// Eigenvalue histogram of a random matrix model.
    Simulate(SimulateArgs),
    /// Cross-check every layer and report one row per comparison.
    Verify(VerifyArgs),
    /// Print the JSON schema of all JSON outputs.
    Schema,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// Tree parameter c = d - 1; fractions like 5/6 are accepted.
    #[arg(long, value_parser = parse_positive_real)]
    pub c: f64,
    /// Largest even moment order (at most 40).
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_parser = parse_positive_real)]
    pub c: f64,
    /// Number of grid points over the support.
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Compressed,
    Sum,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = ModelChoice::Compressed)]
    pub model: ModelChoice,
    /// Tree parameter for the compressed model.
    #[arg(long, value_parser = parse_positive_real)]
    pub c: Option<f64>,
    /// Number of orthogonal pairs for the sum model.
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    /// Ambient dimension.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub realizations: u64,
    #[arg(long, env = "KESTEN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = kesten::randmat::DEFAULT_BINS)]
    pub bins: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_positive_real, default_value = "3")]
    pub c: f64,
    /// Largest even moment order compared against quadrature.
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    /// Ambient dimension of the simulation rows.
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 40)]
    pub realizations: u64,
    #[arg(long, env = "KESTEN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Distance from the real axis for the Stieltjes inversion row.
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    /// Only run the exact and analytic rows.
    #[arg(long)]
    pub skip_simulation: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Accepts `0.25`, `1/4` or `3`.
fn parse_positive_real(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            num / den
        }
        None => s.trim().parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("expected a positive real, got {s}"))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Moments(args) => commands::moments(args).map(|_| true),
        Command::Density(args) => commands::density(args).map(|_| true),
        Command::Simulate(args) => commands::simulate(args).map(|_| true),
        Command::Verify(args) => verify::run(args),
        Command::Schema => output::print_schema().map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
