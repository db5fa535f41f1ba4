//! CBOW word embeddings with hierarchical softmax.
//!
//! A training unit is one query/reply pair. Targets are every in-vocabulary
//! token of `query ⊕ reply`; the context of a target is the sum of the input
//! vectors selected by the [`Strategy`]. Out-of-vocabulary tokens are removed
//! before positions are assigned.

mod huffman;
mod train;
mod vectors;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::corpus::{PairCorpus, Vocabulary};
use crate::math::{dot, log_sigmoid, sigmoid};
use crate::{Error, Result};

pub use huffman::{build_huffman, HuffmanTree};
pub use train::{
    init_parameters, train, train_unit, train_with, EpochStats, LrSchedule, ParamStore, Scratch,
    StepClock, Trainer, UnitStats,
};
pub use vectors::WordVectors;

/// How the context of a target word is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Every other word of the concatenated query and reply.
    VirtualSentence,
    /// Every other word of the sentence (query or reply) holding the target.
    WithinSentence,
    /// Words at most `tau` positions away, never crossing the query/reply
    /// boundary.
    Window { tau: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub strategy: Strategy,
    pub dim: usize,
    pub epochs: usize,
    pub initial_lr: f64,
    pub min_count: u64,
    pub seed: u64,
    /// Worker count. The core trainer is single-threaded; the `sessiontiling`
    /// crate honours values above one.
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            strategy: Strategy::VirtualSentence,
            dim: 100,
            epochs: 5,
            initial_lr: 0.025,
            min_count: 5,
            seed: 1,
            threads: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if let Strategy::Window { tau: 0 } = self.strategy {
            return Err(Error::InvalidConfig("window size tau must be at least 1"));
        }
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be at least 1"));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1"));
        }
        if !(self.initial_lr > 0.0 && self.initial_lr.is_finite()) {
            return Err(Error::InvalidConfig(
                "initial learning rate must be positive",
            ));
        }
        if self.min_count == 0 {
            return Err(Error::InvalidConfig("min_count must be at least 1"));
        }
        if self.threads == 0 {
            return Err(Error::InvalidConfig("threads must be at least 1"));
        }
        Ok(())
    }
}

/// A query/reply pair mapped to vocabulary ids, OOV tokens removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    ids: Vec<u32>,
    query_len: usize,
}

impl Unit {
    pub fn new(query: Vec<u32>, reply: &[u32]) -> Self {
        let query_len = query.len();
        let mut ids = query;
        ids.extend_from_slice(reply);
        Unit { ids, query_len }
    }

    pub fn encode<S: AsRef<str>>(vocab: &Vocabulary, query: &[S], reply: &[S]) -> Self {
        Unit::new(vocab.encode(query), &vocab.encode(reply))
    }

    /// Ids of `query ⊕ reply`.
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn query_len(&self) -> usize {
        self.query_len
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Positions whose vectors form the context of position `t`, excluding
    /// `t` itself.
    pub fn context_positions(&self, strategy: Strategy, t: usize) -> impl Iterator<Item = usize> {
        let span = self.context_span(strategy, t);
        span.filter(move |&i| i != t)
    }

    fn context_span(&self, strategy: Strategy, t: usize) -> Range<usize> {
        let sentence = if t < self.query_len {
            0..self.query_len
        } else {
            self.query_len..self.ids.len()
        };
        match strategy {
            Strategy::VirtualSentence => 0..self.ids.len(),
            Strategy::WithinSentence => sentence,
            Strategy::Window { tau } => {
                t.saturating_sub(tau).max(sentence.start)..(t + tau + 1).min(sentence.end)
            }
        }
    }

    pub(crate) fn context_ids(&self, strategy: Strategy, t: usize, out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.context_positions(strategy, t).map(|i| self.ids[i]));
    }
}

/// Vocabulary, Huffman tree, input vectors `u` and inner-node vectors.
///
/// The inner-node vectors play the output role in `p(w|c)`; they are separate
/// from the input vectors that are summed into contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    vocab: Vocabulary,
    tree: HuffmanTree,
    dim: usize,
    input: Vec<f64>,
    nodes: Vec<f64>,
}

impl EmbeddingModel {
    /// Input vectors drawn uniformly from `[-0.5/dim, 0.5/dim]`, node vectors
    /// zero.
    pub fn initialize(vocab: Vocabulary, dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dim must be at least 1"));
        }
        let tree = build_huffman(&vocab)?;
        let (input, nodes) = init_parameters(vocab.len(), dim, seed);
        Ok(EmbeddingModel {
            vocab,
            tree,
            dim,
            input,
            nodes,
        })
    }

    pub fn from_parts(
        vocab: Vocabulary,
        dim: usize,
        input: Vec<f64>,
        nodes: Vec<f64>,
    ) -> Result<Self> {
        let tree = build_huffman(&vocab)?;
        if dim == 0 {
            return Err(Error::InvalidConfig("dim must be at least 1"));
        }
        if input.len() != vocab.len() * dim {
            return Err(Error::DimensionMismatch {
                left: input.len(),
                right: vocab.len() * dim,
            });
        }
        if nodes.len() != tree.inner_count() * dim {
            return Err(Error::DimensionMismatch {
                left: nodes.len(),
                right: tree.inner_count() * dim,
            });
        }
        if input.iter().chain(&nodes).any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("parameters must be finite"));
        }
        Ok(EmbeddingModel {
            vocab,
            tree,
            dim,
            input,
            nodes,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn tree(&self) -> &HuffmanTree {
        &self.tree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn input_vector(&self, word: u32) -> &[f64] {
        let s = word as usize * self.dim;
        &self.input[s..s + self.dim]
    }

    pub fn node_vector(&self, node: u32) -> &[f64] {
        let s = node as usize * self.dim;
        &self.nodes[s..s + self.dim]
    }

    /// Row-major `V × dim` input vectors.
    pub fn input_vectors(&self) -> &[f64] {
        &self.input
    }

    /// Row-major `(V-1) × dim` inner-node vectors.
    pub fn node_vectors(&self) -> &[f64] {
        &self.nodes
    }

    pub fn input_vectors_mut(&mut self) -> &mut [f64] {
        &mut self.input
    }

    pub fn node_vectors_mut(&mut self) -> &mut [f64] {
        &mut self.nodes
    }

    /// The input vectors as a word lookup table.
    pub fn word_vectors(&self) -> WordVectors {
        WordVectors::new(self.vocab.words().to_vec(), self.dim, self.input.clone())
            .expect("model invariants guarantee a valid table")
    }

    /// Sum of input vectors over the context of position `t` of `unit`.
    pub fn context_vector(&self, strategy: Strategy, unit: &Unit, t: usize) -> Result<Vec<f64>> {
        if t >= unit.len() {
            return Err(Error::InvalidConfig("target position out of range"));
        }
        let mut c = vec![0.0; self.dim];
        let mut any = false;
        for i in unit.context_positions(strategy, t) {
            any = true;
            for (ck, uk) in c.iter_mut().zip(self.input_vector(unit.ids()[i])) {
                *ck += uk;
            }
        }
        if any {
            Ok(c)
        } else {
            Err(Error::EmptyContext)
        }
    }

    /// Sums the input vectors of `context` (with repetition).
    pub fn sum_inputs(&self, context: &[u32]) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for &w in context {
            for (ck, uk) in c.iter_mut().zip(self.input_vector(w)) {
                *ck += uk;
            }
        }
        c
    }

    /// `ln p(word | c)` as the sum of log-sigmoids along the Huffman path.
    pub fn log_prob_id(&self, word: u32, context: &[f64]) -> Result<f64> {
        if word as usize >= self.vocab.len() {
            return Err(Error::InvalidConfig("word id out of range"));
        }
        if context.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: context.len(),
                right: self.dim,
            });
        }
        Ok(self
            .tree
            .path(word)
            .iter()
            .zip(self.tree.code(word))
            .map(|(&n, &bit)| {
                let f = dot(self.node_vector(n), context);
                log_sigmoid(if bit { -f } else { f })
            })
            .sum())
    }

    /// `p(word | c)`, the product of branch sigmoids along the word's path.
    pub fn predict_prob(&self, word: &str, context: &[f64]) -> Result<f64> {
        let id = self
            .vocab
            .id(word)
            .ok_or_else(|| Error::UnknownWord(word.into()))?;
        self.predict_prob_id(id, context)
    }

    pub fn predict_prob_id(&self, word: u32, context: &[f64]) -> Result<f64> {
        if context.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: context.len(),
                right: self.dim,
            });
        }
        Ok(self
            .tree
            .path(word)
            .iter()
            .zip(self.tree.code(word))
            .map(|(&n, &bit)| {
                let s = sigmoid(dot(self.node_vector(n), context));
                if bit {
                    1.0 - s
                } else {
                    s
                }
            })
            .product())
    }

    /// Loss `-ln p(target | Σ u_context)` and its gradient with respect to
    /// every input and node parameter (dense, row-major like the model).
    pub fn loss_gradient(&self, target: u32, context: &[u32]) -> Result<LossGradient> {
        if context.is_empty() {
            return Err(Error::EmptyContext);
        }
        let c = self.sum_inputs(context);
        let mut input = vec![0.0; self.input.len()];
        let mut nodes = vec![0.0; self.nodes.len()];
        let mut dc = vec![0.0; self.dim];
        let mut loss = 0.0;
        for (&n, &bit) in self.tree.path(target).iter().zip(self.tree.code(target)) {
            let v = self.node_vector(n);
            let f = dot(v, &c);
            let label = if bit { 0.0 } else { 1.0 };
            loss -= log_sigmoid(if bit { -f } else { f });
            // d(-ln p)/df = σ(f) - label
            let g = sigmoid(f) - label;
            let row = &mut nodes[n as usize * self.dim..(n as usize + 1) * self.dim];
            for k in 0..self.dim {
                row[k] += g * c[k];
                dc[k] += g * v[k];
            }
        }
        for &w in context {
            let row = &mut input[w as usize * self.dim..(w as usize + 1) * self.dim];
            for k in 0..self.dim {
                row[k] += dc[k];
            }
        }
        Ok(LossGradient { loss, input, nodes })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: f64,
    pub input: Vec<f64>,
    pub nodes: Vec<f64>,
}

/// Mean `ln p(w_t | c_t)` over every trainable target of the corpus: an
/// in-vocabulary token whose context is non-empty.
pub fn log_likelihood(
    model: &EmbeddingModel,
    corpus: &PairCorpus,
    strategy: Strategy,
) -> Result<f64> {
    let mut total = 0.0;
    let mut count = 0u64;
    let mut ctx = Vec::new();
    for (q, r) in corpus.pairs() {
        let unit = Unit::encode(model.vocab(), q, r);
        for t in 0..unit.len() {
            unit.context_ids(strategy, t, &mut ctx);
            if ctx.is_empty() {
                continue;
            }
            let c = model.sum_inputs(&ctx);
            total += model.log_prob_id(unit.ids()[t], &c)?;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::NoTrainableTokens);
    }
    Ok(total / count as f64)
}
