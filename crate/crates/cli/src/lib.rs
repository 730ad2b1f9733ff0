//! `slr` command-line tool: decompose, diagnose, certify, generate, sweep.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 solver did not converge,
//! 3 precondition or parameter failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub mod certify;
pub mod decompose;
pub mod diagnose;
pub mod generate;
pub mod io;
pub mod sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] slr_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use slr_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Usage(_) => EXIT_IO,
            CliError::Core(e) => match e {
                E::Dimension { .. } | E::NonFinite { .. } | E::Internal(_) => EXIT_IO,
                E::NonConvergence { .. } | E::Factorization { .. } => EXIT_NOT_CONVERGED,
                E::Parameter(_) | E::Precondition(_) | E::UnsupportedSize { .. } => EXIT_PRECONDITION,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "slr", version, about = "Sparse plus low-rank matrix decomposition")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split an observed matrix into sparse and low-rank parts.
    Decompose(decompose::DecomposeArgs),
    /// Incoherence profile and recovery conditions of a target pair.
    Diagnose(diagnose::DiagnoseArgs),
    /// Build and check the dual certificate of a target pair.
    Certify(certify::CertifyArgs),
    /// Write a synthetic instance.
    Generate(generate::GenerateArgs),
    /// Recovery success over a grid of ranks and support densities.
    Sweep(sweep::SweepArgs),
}

pub fn run(command: &Command) -> Result<i32, CliError> {
    match command {
        Command::Decompose(a) => decompose::run(a),
        Command::Diagnose(a) => diagnose::run(a),
        Command::Certify(a) => certify::run(a),
        Command::Generate(a) => generate::run(a),
        Command::Sweep(a) => sweep::run(a),
    }
}

/// Parse arguments, run, print any error to stderr, and return the exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_IO } else { EXIT_OK };
        }
    };
    match run(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// JSON has no infinities; unbounded limits are written as `null`.
pub(crate) fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Accepts a positive number or `inf`.
pub(crate) fn parse_box(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("expected a number or inf, got {s:?}"))?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("box bound must be positive, got {s}"))
    }
}

/// Hoist nested object fields to the top level as `parent_child`.
pub fn flatten_json(value: serde_json::Value) -> serde_json::Value {
    let serde_json::Value::Object(map) = value else {
        return value;
    };
    let mut out = serde_json::Map::new();
    for (key, v) in map {
        match flatten_json(v) {
            serde_json::Value::Object(inner) => {
                for (k, x) in inner {
                    out.insert(format!("{key}_{k}"), x);
                }
            }
            other => {
                out.insert(key, other);
            }
        }
    }
    serde_json::Value::Object(out)
}
