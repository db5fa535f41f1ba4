use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Fewer words survived the frequency threshold than the operation needs.
    EmptyVocabulary,
    /// A training target has no context word.
    EmptyContext,
    /// No target in the corpus has a non-empty in-vocabulary context.
    NoTrainableTokens,
    UnknownWord(String),
    DimensionMismatch {
        left: usize,
        right: usize,
    },
    /// Segmentation needs at least two utterances.
    TooShort {
        utterances: usize,
    },
    /// A gold boundary does not name a gap of its session.
    InvalidBoundary {
        gap: usize,
        gaps: usize,
    },
    EmptySession,
    NoGoldBoundaries,
    SessionCountMismatch {
        predicted: usize,
        gold: usize,
    },
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyVocabulary => f.write_str("vocabulary is empty after applying min_count"),
            Error::EmptyContext => f.write_str("target word has no context words"),
            Error::NoTrainableTokens => {
                f.write_str("corpus has no target with a non-empty in-vocabulary context")
            }
            Error::UnknownWord(w) => write!(f, "word {w:?} is not in the vocabulary"),
            Error::DimensionMismatch { left, right } => {
                write!(f, "vector dimensions differ: {left} vs {right}")
            }
            Error::TooShort { utterances } => write!(
                f,
                "session has {utterances} utterance(s); segmentation needs at least 2"
            ),
            Error::InvalidBoundary { gap, gaps } => {
                write!(f, "boundary at gap {gap} but the session has {gaps} gap(s)")
            }
            Error::EmptySession => f.write_str("session has no utterances"),
            Error::NoGoldBoundaries => f.write_str("validation sessions carry no gold boundaries"),
            Error::SessionCountMismatch { predicted, gold } => {
                write!(f, "predicted {predicted} session(s) but gold has {gold}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
