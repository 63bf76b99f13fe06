//! Command-line driver: `graphmean {mean,bench,classify,gen,inspect}`.
//!
//! Every command writes its outputs plus a `config.json` echo of the fully
//! resolved flags into the output directory, and a short human summary to
//! standard output. Exit codes: 0 success, 1 usage error, 2 data error,
//! 3 size-cap error.

pub mod args;
mod commands;
mod input;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use graphmean::Error;

pub use args::Cli;
pub use commands::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(Error::UnsupportedSize { .. }) => 3,
            CliError::Core(_) => 2,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Summaries go to `out`, diagnostics to `err`.
pub fn main_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(&cli) {
        Ok(summary) => {
            let _ = writeln!(out, "{summary}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
