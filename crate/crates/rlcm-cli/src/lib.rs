//! The `rlcm-kms` command line tool.
//!
//! Exit status: 0 when every check passed or was undecided, 1 when a check
//! failed, 2 for usage and configuration errors, 3 when a computation would
//! exceed a size cap.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;

use clap::Parser;
use rlcm_core::SemigroupError;
use rlcm_engine::EngineError;
use rlcm_families::BuildError;
use rlcm_rep::RepError;
use thiserror::Error;

use args::{Cli, CliCommand};
use config::{Command, JobConfig};
pub use report::Report;

pub const THREADS_VAR: &str = "RLCM_KMS_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {constraint}")]
    Validation { field: String, constraint: String },
    #[error("{0}")]
    Sizing(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_)
            | CliError::Parse { .. }
            | CliError::Validation { .. }
            | CliError::Io(_) => 2,
            CliError::Sizing(_) => 3,
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::Capped { .. } | SemigroupError::Overflow(_) => {
                CliError::Sizing(e.to_string())
            }
            SemigroupError::Internal(_) => CliError::Failure(e.to_string()),
            _ => CliError::Validation {
                field: "element".into(),
                constraint: e.to_string(),
            },
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Semigroup(e) => e.into(),
            EngineError::Precision { .. } => CliError::Sizing(e.to_string()),
            EngineError::NotAdmissible { .. } => CliError::Failure(e.to_string()),
            EngineError::BelowOne { .. } => CliError::Validation {
                field: "beta".into(),
                constraint: e.to_string(),
            },
            EngineError::Precondition(_) => CliError::Validation {
                field: "parameters".into(),
                constraint: e.to_string(),
            },
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::Engine(e) => e.into(),
            RepError::Semigroup(e) => e.into(),
            RepError::Sizing { .. } | RepError::Truncation { .. } => {
                CliError::Sizing(e.to_string())
            }
            RepError::Precondition(_) => CliError::Validation {
                field: "parameters".into(),
                constraint: e.to_string(),
            },
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Invalid { field, constraint } => CliError::Validation { field, constraint },
            other => CliError::Validation {
                field: "semigroup".into(),
                constraint: other.to_string(),
            },
        }
    }
}

/// Validates and runs a job, returning the rendered output and whether a check failed.
pub fn run_job(cfg: &JobConfig) -> Result<(String, bool), CliError> {
    let command = cfg.validate()?;
    let outcome = commands::execute(cfg, command)?;
    let rendered = report::render(cfg, &outcome)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    report::write(cfg, &rendered)?;
    Ok((rendered, outcome.failed))
}

fn configure_threads() -> Result<(), CliError> {
    let Some(raw) = std::env::var_os(THREADS_VAR) else {
        return Ok(());
    };
    let n = raw
        .to_str()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn load(path: &std::path::Path) -> Result<JobConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    JobConfig::from_toml(&text)
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (job, command) = match cli.command {
        CliCommand::Run { config, output } => {
            let mut cfg = load(&config)?;
            output.apply(&mut cfg.output);
            return run_job(&cfg).map(|(_, failed)| failed);
        }
        CliCommand::Describe(j) => (j, Command::Describe),
        CliCommand::CheckAdmissible(j) => (j, Command::CheckAdmissible),
        CliCommand::Action(j) => (j, Command::Action),
        CliCommand::Zeta(j) => (j, Command::Zeta),
        CliCommand::KmsEval(j) => (j, Command::KmsEval),
        CliCommand::Kappa(j) => (j, Command::Kappa),
        CliCommand::Ground(j) => (j, Command::Ground),
        CliCommand::Classify(j) => (j, Command::Classify),
        CliCommand::VerifyRep(j) => (j, Command::VerifyRep),
    };
    run_job(&job.config(command)?).map(|(_, failed)| failed)
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(false) => 0,
        Ok(true) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
