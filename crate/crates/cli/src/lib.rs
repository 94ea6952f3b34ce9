//! The `fockforge` command line: model runs and the verification suites.

pub mod battery;
pub mod checks;
pub mod model;
pub mod report;
pub mod suite;
pub mod tasks;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fockforge_core::Error;
use thiserror::Error as ThisError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, ThisError, PartialEq)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Errors from battery jobs: inputs are fixed there, so every failure is numerical.
    pub fn from_core_internal(e: Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// Errors from model inputs: numerical breakdowns exit 3, rejected inputs exit 2.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Schema(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Parser)]
#[command(name = "fockforge", version, about = "Verification of CCR/CAR constructions on truncated Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a model file and write its report.
    Run {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the smoke or full battery, one report per job.
    Suite {
        name: String,
        #[arg(long, default_value = "reports")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Reads, runs and serializes a model. Returns the report and its serialized body.
pub fn run_model_text(text: &str, seed: u64, format: Format) -> Result<(report::Report, String), CliError> {
    let model = model::ModelFile::parse(text)?;
    let report = tasks::run_model(&model, seed)?;
    let body = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    Ok((report, body))
}

fn run(model: PathBuf, out: Option<PathBuf>, format: Format, seed: u64) -> Result<i32, CliError> {
    let start = Instant::now();
    let text = std::fs::read_to_string(&model).map_err(|e| CliError::Schema(format!("{}: {e}", model.display())))?;
    let (report, body) = run_model_text(&text, seed, format)?;
    match out {
        Some(path) => std::fs::write(&path, &body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    for c in report.failed_checks() {
        eprintln!("check failed: {} residual {:e} > tolerance {:e}", c.name, c.residual, c.tolerance);
    }
    eprintln!(
        "{}: {} in {:.3}s",
        model.display(),
        if report.pass { "pass" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    Ok(if report.pass { 0 } else { 1 })
}

/// Entry point shared by the binary and the tests. Returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Run { model, out, format, seed } => run(model, out, format, seed),
        Command::Suite {
            name,
            out_dir,
            format,
            seed,
        } => suite::run_suite(&name, &out_dir, seed, format),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fockforge: {e}");
            e.exit_code()
        }
    }
}
