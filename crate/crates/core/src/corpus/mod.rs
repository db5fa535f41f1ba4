//! Utterances, sessions, query/reply pair corpora and vocabularies.

mod tokenize;
mod vocab;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

pub use tokenize::tokenize;
pub use vocab::{build_vocab, Vocabulary};

/// Which agent produced an utterance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Query,
    Reply,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::Query => Role::Reply,
            Role::Reply => Role::Query,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Utterance {
    pub index: usize,
    pub role: Role,
    pub raw: String,
    pub tokens: Vec<String>,
}

impl Utterance {
    pub fn new(index: usize, role: Role, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let tokens = tokenize(&raw);
        Utterance {
            index,
            role,
            raw,
            tokens,
        }
    }
}

/// An ordered run of utterances with gold boundaries.
///
/// Gap `i` lies between utterance `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    utterances: Vec<Utterance>,
    gold_boundaries: BTreeSet<usize>,
}

impl Session {
    /// Checks that the session is non-empty, utterance indices are
    /// contiguous from zero, and every boundary names a gap.
    pub fn new(utterances: Vec<Utterance>, gold_boundaries: BTreeSet<usize>) -> Result<Self> {
        if utterances.is_empty() {
            return Err(Error::EmptySession);
        }
        if utterances.iter().enumerate().any(|(i, u)| u.index != i) {
            return Err(Error::InvalidConfig(
                "utterance indices must be contiguous from 0",
            ));
        }
        let gaps = utterances.len() - 1;
        if let Some(&gap) = gold_boundaries.iter().find(|&&g| g >= gaps) {
            return Err(Error::InvalidBoundary { gap, gaps });
        }
        Ok(Session {
            utterances,
            gold_boundaries,
        })
    }

    /// Builds a session from raw lines with alternating roles, query first.
    pub fn from_lines<I, S>(lines: I, gold_boundaries: BTreeSet<usize>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut role = Role::Query;
        let utterances = lines
            .into_iter()
            .enumerate()
            .map(|(i, raw)| {
                let u = Utterance::new(i, role, raw);
                role = role.other();
                u
            })
            .collect();
        Session::new(utterances, gold_boundaries)
    }

    pub fn utterances(&self) -> &[Utterance] {
        &self.utterances
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }

    pub fn gap_count(&self) -> usize {
        self.utterances.len().saturating_sub(1)
    }

    pub fn gold_boundaries(&self) -> &BTreeSet<usize> {
        &self.gold_boundaries
    }

    /// Same utterances, different boundaries.
    pub fn with_boundaries(&self, boundaries: BTreeSet<usize>) -> Result<Session> {
        Session::new(self.utterances.clone(), boundaries)
    }
}

pub type Tokens = Vec<String>;

/// Query/reply pairs used to train embeddings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PairCorpus {
    pairs: Vec<(Tokens, Tokens)>,
    token_count: usize,
}

impl PairCorpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, query: Tokens, reply: Tokens) {
        self.token_count += query.len() + reply.len();
        self.pairs.push((query, reply));
    }

    pub fn pairs(&self) -> &[(Tokens, Tokens)] {
        &self.pairs
    }

    /// Total running words `T` over both sides of every pair.
    pub fn token_count(&self) -> usize {
        self.token_count
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &String> {
        self.pairs.iter().flat_map(|(q, r)| q.iter().chain(r))
    }
}

impl FromIterator<(Tokens, Tokens)> for PairCorpus {
    fn from_iter<T: IntoIterator<Item = (Tokens, Tokens)>>(iter: T) -> Self {
        let mut corpus = PairCorpus::new();
        for (q, r) in iter {
            corpus.push(q, r);
        }
        corpus
    }
}
