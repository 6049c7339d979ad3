//! `zenoptics` command-line tool.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags or values), 1 on
//! runtime errors (I/O, malformed input files). Diagnostics go to stderr;
//! without `--out-prefix` the data itself goes to stdout.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<zenoptics::Error> for CliError {
    fn from(e: zenoptics::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub const THREADS_ENV: &str = "ZENOPTICS_THREADS";

fn configure_threads() -> CliResult {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Runtime(e.into()))
}

pub fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Trace(a) => commands::trace(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Mc(a) => commands::mc(a),
        Command::Jitter(a) => commands::jitter(a),
        Command::Chain(a) => commands::chain(a),
        Command::Rerun(a) => commands::rerun(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| dispatch(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
