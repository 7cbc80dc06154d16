//! `negligible`: runs bound calculations, memorizer experiments and exact
//! verifiers from JSON configs and writes reproducible JSON/CSV artifacts.
//!
//! Exit codes: 0 success, 1 verification failed, 2 bad config or I/O,
//! 3 domain error, 4 distribution does not dominate the bound, 5 budget
//! exceeded.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use negligible::Error;

#[derive(Parser, Debug)]
#[command(
    name = "negligible",
    version,
    about = "Hallucination-probability bounds, sweeps and exact verifiers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed; overrides the config's `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; defaults to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel trials and enumerations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Enumeration budget; overrides the config's `budget`.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Output format for commands that support both.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Sufficient and necessary training sizes for a CDF lower bound.
    Bounds,
    /// Train the memorizer once and evaluate its hallucination probability.
    TrainEval,
    /// Repeated trials over a grid of training sizes (CSV).
    Sweep,
    /// Exhaustive no-free-lunch check on a finite instance.
    NflVerify,
    /// Diagonal ground truth against a list of table models (CSV).
    Diagonalize,
    /// Smallest high-mass block set for a memoryless source.
    TypicalSet,
}

/// A message and the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(2, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 5,
            Error::Domain(_) | Error::Overflow(_) | Error::Unsupported(_) => 3,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command, &cli.common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
