//! `threesq`: run identity verifications, compute tables, list forms.

mod cache;
mod compute;
mod forms;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

/// Failure classes, one per non-zero exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<threesq::Error> for CliError {
    fn from(e: threesq::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "threesq", version, about = "Verify identities around sums of three squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one identity check over an order, an n-range or a sample battery.
    Verify(verify::VerifyArgs),
    /// Print exact values of an arithmetic function.
    Compute {
        #[arg(value_enum)]
        function: compute::Function,
        /// Integers or inclusive ranges `a..b`; put negative ranges after `--`.
        #[arg(required = true, allow_negative_numbers = true)]
        args: Vec<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// List the reduced forms of a negative discriminant.
    Forms {
        #[arg(allow_negative_numbers = true)]
        discriminant: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Map the solutions of rs + rt + st = n to reduced forms.
    Bijection {
        n: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Persist or restore the class-number tables.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    /// Write h(D) and H(N) tables as CSV.
    Save {
        path: PathBuf,
        /// Fill H(N) for N ≤ this bound and h(D) for -bound ≤ D < 0 first.
        #[arg(long, default_value_t = 0)]
        to: u64,
    },
    /// Read a table, validating it against recomputed values.
    Load { path: PathBuf },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Verify(args) => verify::run(args),
        Command::Compute { function, args, format } => compute::run(function, &args, format),
        Command::Forms { discriminant, format } => forms::forms(discriminant, format),
        Command::Bijection { n, format } => forms::bijection(n, format),
        Command::Cache { action } => match action {
            CacheAction::Save { path, to } => cache::save(&path, to),
            CacheAction::Load { path } => cache::load(&path),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
