use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::PairCorpus;
use crate::{Error, Result};

/// Words with their frequencies, ids dense in `0..len()`.
///
/// Ids follow descending frequency with ties broken lexicographically, so the
/// assignment is deterministic for a given set of counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: BTreeMap<String, u32>,
    min_count: u64,
    total_kept_tokens: u64,
}

impl Vocabulary {
    /// Keeps every word whose count is at least `min_count`.
    pub fn from_counts<I, S>(counts: I, min_count: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        if min_count == 0 {
            return Err(Error::InvalidConfig("min_count must be at least 1"));
        }
        let mut merged: BTreeMap<String, u64> = BTreeMap::new();
        for (w, c) in counts {
            *merged.entry(w.into()).or_default() += c;
        }
        let mut kept: Vec<(String, u64)> = merged
            .into_iter()
            .filter(|&(_, c)| c >= min_count)
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        // BTreeMap iteration is already lexicographic; a stable sort keeps it for ties.
        kept.sort_by_key(|&(_, c)| core::cmp::Reverse(c));

        let total_kept_tokens = kept.iter().map(|(_, c)| c).sum();
        let index = kept
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w.clone(), i as u32))
            .collect();
        let (words, counts) = kept.into_iter().unzip();
        Ok(Vocabulary {
            words,
            counts,
            index,
            min_count,
            total_kept_tokens,
        })
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    /// Running words of the source corpus that are in the vocabulary.
    pub fn total_kept_tokens(&self) -> u64 {
        self.total_kept_tokens
    }

    /// Maps tokens to ids, dropping out-of-vocabulary ones.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<u32> {
        tokens.iter().filter_map(|t| self.id(t.as_ref())).collect()
    }
}

/// Counts every token of both sides of every pair.
pub fn build_vocab(corpus: &PairCorpus, min_count: u64) -> Result<Vocabulary> {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for t in corpus.tokens() {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    Vocabulary::from_counts(counts, min_count)
}
