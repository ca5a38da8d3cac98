use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum QftError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    /// Malformed input file. `line` is 1-based for text files; for binary
    /// files it is 0 and `offset` carries the byte position instead.
    #[error("format error at line {line}, offset {offset}: {message}")]
    Format {
        line: usize,
        offset: usize,
        message: String,
    },

    #[error("no FFT plan for a {n1}x{n2} grid")]
    Plan { n1: usize, n2: usize },

    #[error("spectrum carries no component spectra")]
    MissingComponents,

    #[error("no sample exceeds the polar floor")]
    AllInvalid,

    #[error("only {found} samples above the fit floor, need at least {needed}")]
    InsufficientSupport { found: usize, needed: usize },

    #[error("signal is identically zero")]
    ZeroSignal,
}

pub type Result<T> = std::result::Result<T, QftError>;

impl QftError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QftError::Domain(msg.into())
    }

    pub(crate) fn text(line: usize, offset: usize, message: impl Into<String>) -> Self {
        QftError::Format {
            line,
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn binary(offset: usize, message: impl Into<String>) -> Self {
        QftError::Format {
            line: 0,
            offset,
            message: message.into(),
        }
    }
}
