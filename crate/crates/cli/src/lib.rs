//! Configuration loading, mask files and the command implementations behind
//! the `lfframe` binary.
//!
//! Every command returns a [`Outcome`] carrying the text to emit and an exit
//! code; failures come back as [`CliError`], whose [`CliError::exit_code`]
//! is the process status.

pub mod commands;
pub mod config;
pub mod maskfile;

use thiserror::Error;

/// Bumped whenever a report field is renamed or removed.
pub const REPORT_VERSION: u32 = 1;

pub mod exit {
    pub const PASS: i32 = 0;
    pub const VERIFIED_FALSE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const DATA: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("input data error: {0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Data(_) => exit::DATA,
        }
    }

    /// Core errors raised while interpreting a configuration.
    pub fn config(e: lfframe::Error) -> Self {
        CliError::Config(e.to_string())
    }

    /// Core errors raised while reading user data files.
    pub fn data(path: &std::path::Path, e: lfframe::Error) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: the main document and the process status.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
    /// One-line summary for stderr.
    pub summary: Option<String>,
}

impl Outcome {
    pub fn ok(output: String) -> Self {
        Outcome { output, code: exit::PASS, summary: None }
    }
}
