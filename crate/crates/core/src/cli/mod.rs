//! Command-line driver. Every subcommand collects its artifacts in memory and
//! writes them into the output directory only once the whole run succeeded.

mod args;
mod commands;
mod settings;

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;

use crate::error::Error;
use args::{Cli, Command};
pub use settings::SEED_ENV;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Failure of a CLI invocation.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Run(Error::Config(_)) => EXIT_USAGE,
            CliError::Run(Error::Numerical(_) | Error::HypothesisViolated(_) | Error::InvalidPmf(_)) => EXIT_NUMERICAL,
            CliError::Run(_) => EXIT_DATA,
        }
    }
}

/// Named text artifacts produced by a subcommand, plus an optional failure
/// that should be reported after the artifacts are written.
#[derive(Debug, Default)]
pub(crate) struct Outputs {
    pub files: Vec<(String, String)>,
    pub failure: Option<Error>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }
}

fn write_outputs(dir: &Path, outputs: &Outputs) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, contents) in &outputs.files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Parse `argv` (program name first), run the subcommand, and return the
/// process exit code. Diagnostics go to stderr as a single line.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    print!("{e}");
                    EXIT_OK
                }
                _ => {
                    let msg = e.to_string();
                    let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
                    eprintln!("rhythmkit: {}", line.trim_start_matches("error: "));
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("rhythmkit: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    let (dir, outputs) = commands::dispatch(command)?;
    write_outputs(&dir, &outputs)?;
    match outputs.failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}
