//! Batch front end for the spectral-triple checks.
//!
//! Every subcommand produces a [`Report`] that renders as JSON or CSV. Exit
//! status is 0 on success, 1 when a numerical check fails or a library call
//! errors, and 2 on usage errors.

mod commands;
mod config;
mod report;

use std::ffi::OsString;

use clap::Parser;
use thiserror::Error;

pub use commands::execute;
pub use config::{Builtin, Command, Format, Model, Parity, RunConfig, Toggle};
pub use report::{Report, Table};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "SPECTRE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

/// Result of one invocation: exit code and captured output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs it, reading the thread cap from the environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => run_with_threads(args, Some(n)),
            _ => usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
        Err(_) => run_with_threads(args, None),
    }
}

/// Same as [`run`] with an explicit thread cap; `None` uses the global pool.
pub fn run_with_threads<I, T>(args: I, threads: Option<usize>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&config)),
            Err(e) => Err(CliError::Failed(format!("cannot build thread pool: {e}"))),
        },
        None => execute(&config),
    };
    match result {
        Ok(report) => match report.render(config.format) {
            Ok(stdout) => {
                let code = if report.passed { 0 } else { 1 };
                let stderr = if report.passed { String::new() } else { "check failed\n".to_string() };
                Outcome { code, stdout, stderr }
            }
            Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn usage(message: String) -> Outcome {
    Outcome { code: 2, stdout: String::new(), stderr: format!("error: {message}\n") }
}
