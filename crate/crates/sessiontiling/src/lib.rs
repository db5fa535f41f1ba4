//! File formats, multi-threaded training, a synthetic dialogue generator and
//! the `sessiontiling` command line, on top of [`sessiontiling_core`].

pub mod cli;
mod error;
pub mod formats;
pub mod parallel;
pub mod report;
pub mod synth;

pub use error::{Error, FormatError, Result};
pub use sessiontiling_core::{corpus, embeddings, eval, similarity, tiling};
