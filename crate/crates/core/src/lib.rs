//! Dialogue session segmentation with embedding-enhanced TextTiling.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithmic
//! piece of the pipeline:
//!
//! * [`corpus`]: tokenization, sessions, pair corpora and vocabularies.
//! * [`embeddings`]: CBOW word embeddings trained with hierarchical softmax,
//!   with virtual-sentence (query⊕reply), within-sentence and window contexts.
//! * [`similarity`]: tf·idf, sum-pooling, heuristic-max and heuristic-avg
//!   utterance similarity.
//! * [`tiling`]: similarity profiles, valley depths and the `μ + α·σ` cutoff,
//!   offline and streaming.
//! * [`eval`]: boundary precision/recall/F, the random prior baseline and
//!   α tuning.
//!
//! File formats, multi-threaded training and the command line live in the
//! `sessiontiling` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod embeddings;
mod error;
pub mod eval;
mod math;
pub mod similarity;
pub mod tiling;

pub use error::{Error, Result};
