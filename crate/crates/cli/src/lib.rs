//! Command-line front end: runs a solution family on a grid, verifies it and
//! writes profiles, a gnuplot script and a plain-text report.
//!
//! Exit codes: 0 when every check passes, 2 for configuration errors, 3 for
//! numerical failures or failed checks, 1 for I/O errors.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use commands::{execute, split_time, Check, NormRow, Outcome};
pub use config::{parse_config, parse_config_str, Command, ConfigSources, Overrides, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("numerical failure in {check}: {message}")]
    Numerical { check: String, message: String },

    #[error("checks failed: {}", .0.join(", "))]
    ChecksFailed(Vec<String>),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => EXIT_CONFIG,
            Self::Numerical { .. } | Self::ChecksFailed(_) => EXIT_NUMERICAL,
            Self::Io(_) => EXIT_IO,
        }
    }
}

/// Runs `command` and writes its files into `cfg.output_dir`.
pub fn run(command: Command, cfg: &RunConfig) -> Result<(Outcome, Vec<PathBuf>), CliError> {
    let outcome = execute(command, cfg)?;
    let written = output::write_all(&cfg.output_dir, &outcome.files)?;
    Ok((outcome, written))
}

/// Parses `argv`, runs, prints a summary and returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (command, mut sources) = match cli.into_parts() {
        Ok(parts) => parts,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    sources.env_output_dir = std::env::var_os("NRT_OUTPUT_DIR").filter(|v| !v.is_empty()).map(PathBuf::from);
    let result = parse_config(command, &sources).and_then(|cfg| run(command, &cfg).map(|r| (cfg, r)));
    match result {
        Ok((cfg, (outcome, _))) => {
            print!("{}", outcome.report);
            println!();
            println!("output written to {}", cfg.output_dir.display());
            if outcome.passed() {
                EXIT_OK
            } else {
                let failed = outcome.failed_checks().iter().map(|s| s.to_string()).collect();
                let e = CliError::ChecksFailed(failed);
                eprintln!("error: {e}");
                e.exit_code()
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
