//! Command-line front end. [`run`] parses arguments, executes one command and
//! returns the process exit status:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success, every suite assertion passed     |
//! | 1    | usage error                               |
//! | 2    | I/O or file-format error                  |
//! | 3    | numeric failure (an assertion failed)     |

pub mod args;
mod commands;
pub mod plot;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use crate::error::QftError;

pub use args::{Cli, Command, Common, SignalSpec};
pub use plot::{emit_plot_data, PlotReport, PlotTable};
pub use report::{Check, Report, ReportConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<QftError> for CliError {
    fn from(e: QftError) -> CliError {
        let msg = e.to_string();
        match e {
            QftError::Io(_) | QftError::Format { .. } => CliError::Io(msg),
            QftError::Domain(_) => CliError::Usage(msg),
            QftError::Plan { .. }
            | QftError::MissingComponents
            | QftError::AllInvalid
            | QftError::InsufficientSupport { .. }
            | QftError::ZeroSignal => CliError::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(format!("i/o error: {e}"))
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// Fails early when `path` cannot be read.
pub(crate) fn check_input(path: &Path) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Io(format!("cannot read input `{}`", path.display())))
    }
}

/// Fails early when the directory that would hold `path` is missing.
pub(crate) fn check_output(path: &Path) -> CliResult<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    match parent {
        Some(dir) if !dir.is_dir() => Err(CliError::Io(format!(
            "output directory `{}` does not exist",
            dir.display()
        ))),
        _ => Ok(()),
    }
}

/// Runs the tool with explicit argument and output streams. The first argument is
/// the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let rendered = e.to_string();
                    let line = rendered.lines().next().unwrap_or("usage error");
                    let _ = writeln!(stderr, "qft: {}", line.trim_start_matches("error: "));
                    EXIT_USAGE
                }
            };
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let outcome = match cli.common.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli, &mut buf)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => commands::execute(&cli, &mut buf),
    };
    if let Err(e) = stdout.write_all(&buf).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "qft: i/o error: {e}");
        return EXIT_IO;
    }
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "qft: {e}");
            e.exit_code()
        }
    }
}
