use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A problem with the contents of an input file. Line numbers are 1-based.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {0}: expected `query<TAB>reply` with both sides non-empty")]
    MalformedLine(usize),
    #[error("line {line}: `====` before the first or after the last utterance of a session")]
    BoundaryAtEdge { line: usize },
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
}

impl FormatError {
    pub fn line(&self) -> usize {
        match *self {
            FormatError::MalformedLine(line)
            | FormatError::BoundaryAtEdge { line }
            | FormatError::ParseError { line, .. } => line,
        }
    }

    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        FormatError::ParseError {
            line,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Core(#[from] sessiontiling_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, source: FormatError) -> Self {
        Error::Format {
            path: path.into(),
            source,
        }
    }
}
