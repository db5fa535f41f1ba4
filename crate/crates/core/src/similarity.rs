//! Utterance similarity: tf·idf cosine and three embedding heuristics.
//!
//! Every scorer returns 0 when either side has no usable token, so a depth
//! profile never contains NaN.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{PairCorpus, Session};
use crate::embeddings::WordVectors;
use crate::math::{dot, ln, norm};
use crate::{Error, Result};

/// Cosine of two vectors; 0 when either has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(cosine_unchecked(a, b))
}

#[inline]
fn cosine_unchecked(a: &[f64], b: &[f64]) -> f64 {
    let denom = norm(a) * norm(b);
    if denom == 0.0 {
        0.0
    } else {
        (dot(a, b) / denom).clamp(-1.0, 1.0)
    }
}

/// Sum of the vectors of the in-vocabulary tokens, with multiplicity.
pub fn sentence_vector<S: AsRef<str>>(tokens: &[S], vectors: &WordVectors) -> Vec<f64> {
    let mut s = vec![0.0; vectors.dim()];
    for v in vectors.lookup_all(tokens) {
        for (sk, vk) in s.iter_mut().zip(v) {
            *sk += vk;
        }
    }
    s
}

/// Cosine of the sum-pooled sentence vectors.
pub fn sim_sum_pool<S: AsRef<str>>(s1: &[S], s2: &[S], vectors: &WordVectors) -> f64 {
    cosine_unchecked(&sentence_vector(s1, vectors), &sentence_vector(s2, vectors))
}

/// For each word of `s1`, the best cosine against any word of `s2`,
/// averaged over `s1`. Not symmetric.
pub fn sim_heuristic_max<S: AsRef<str>>(s1: &[S], s2: &[S], vectors: &WordVectors) -> f64 {
    let second: Vec<&[f64]> = vectors.lookup_all(s2).collect();
    if second.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;
    let mut n1 = 0usize;
    for w in vectors.lookup_all(s1) {
        let best = second
            .iter()
            .map(|v| cosine_unchecked(w, v))
            .fold(f64::NEG_INFINITY, f64::max);
        total += best;
        n1 += 1;
    }
    if n1 == 0 {
        0.0
    } else {
        total / n1 as f64
    }
}

/// Mean word-by-word cosine over all pairs. Symmetric.
pub fn sim_heuristic_avg<S: AsRef<str>>(s1: &[S], s2: &[S], vectors: &WordVectors) -> f64 {
    let first: Vec<&[f64]> = vectors.lookup_all(s1).collect();
    let second: Vec<&[f64]> = vectors.lookup_all(s2).collect();
    if first.is_empty() || second.is_empty() {
        return 0.0;
    }
    let mut cosines: Vec<f64> = first
        .iter()
        .flat_map(|w| second.iter().map(move |v| cosine_unchecked(w, v)))
        .collect();
    // summing in sorted order makes the result independent of argument order
    cosines.sort_unstable_by(f64::total_cmp);
    let total: f64 = cosines.iter().sum();
    total / cosines.len() as f64
}

/// Document frequencies over a reference collection of utterances.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IdfStats {
    df: BTreeMap<String, u64>,
    documents: u64,
}

impl IdfStats {
    /// Each item is one document (utterance).
    pub fn from_documents<'a, I, S>(documents: I) -> Self
    where
        I: IntoIterator<Item = &'a [S]>,
        S: AsRef<str> + 'a,
    {
        let mut stats = IdfStats::default();
        for doc in documents {
            stats.add_document(doc);
        }
        stats
    }

    pub fn from_sessions(sessions: &[Session]) -> Self {
        Self::from_documents(
            sessions
                .iter()
                .flat_map(|s| s.utterances())
                .map(|u| u.tokens.as_slice()),
        )
    }

    /// Queries and replies each count as a document.
    pub fn from_pair_corpus(corpus: &PairCorpus) -> Self {
        Self::from_documents(
            corpus
                .pairs()
                .iter()
                .flat_map(|(q, r)| [q.as_slice(), r.as_slice()]),
        )
    }

    /// Rebuilds stats from stored frequencies. Zero frequencies are rejected.
    pub fn from_frequencies<I>(documents: u64, df: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        let df: BTreeMap<String, u64> = df.into_iter().collect();
        if df.values().any(|&c| c == 0 || c > documents) {
            return Err(Error::InvalidConfig(
                "document frequency must lie in 1..=document count",
            ));
        }
        Ok(IdfStats { df, documents })
    }

    pub fn add_document<S: AsRef<str>>(&mut self, tokens: &[S]) {
        self.documents += 1;
        let mut seen: Vec<&str> = tokens.iter().map(|t| t.as_ref()).collect();
        seen.sort_unstable();
        seen.dedup();
        for w in seen {
            *self.df.entry(String::from(w)).or_default() += 1;
        }
    }

    pub fn documents(&self) -> u64 {
        self.documents
    }

    pub fn df(&self, word: &str) -> u64 {
        self.df.get(word).copied().unwrap_or(0)
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (&str, u64)> {
        self.df.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Smoothed `ln((N+1)/(df+1)) + 1`; unseen words take `df = 0`.
    pub fn idf(&self, word: &str) -> f64 {
        ln((self.documents as f64 + 1.0) / (self.df(word) as f64 + 1.0)) + 1.0
    }

    fn weights<'a, S: AsRef<str>>(&self, tokens: &'a [S]) -> BTreeMap<&'a str, f64> {
        let mut tf: BTreeMap<&str, f64> = BTreeMap::new();
        for t in tokens {
            *tf.entry(t.as_ref()).or_default() += 1.0;
        }
        for (w, x) in tf.iter_mut() {
            *x *= self.idf(w);
        }
        tf
    }
}

/// Cosine of raw-tf × idf sparse vectors.
pub fn sim_tfidf<S: AsRef<str>>(s1: &[S], s2: &[S], stats: &IdfStats) -> f64 {
    let a = stats.weights(s1);
    let b = stats.weights(s2);
    let na: f64 = a.values().map(|x| x * x).sum();
    let nb: f64 = b.values().map(|x| x * x).sum();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let d: f64 = a.iter().filter_map(|(w, x)| b.get(w).map(|y| x * y)).sum();
    (d / (crate::math::sqrt(na) * crate::math::sqrt(nb))).clamp(0.0, 1.0)
}

/// Which similarity measure a scorer applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScorerKind {
    TfIdf,
    SumPool,
    HeuristicMax,
    HeuristicAvg,
}

impl ScorerKind {
    pub fn uses_embeddings(self) -> bool {
        !matches!(self, ScorerKind::TfIdf)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum SimilarityScorer<'a> {
    TfIdf(&'a IdfStats),
    SumPool(&'a WordVectors),
    HeuristicMax(&'a WordVectors),
    HeuristicAvg(&'a WordVectors),
}

impl<'a> SimilarityScorer<'a> {
    /// Pairs an embedding kind with its vectors. Panics on
    /// [`ScorerKind::TfIdf`], which needs [`IdfStats`] instead.
    pub fn embedding(kind: ScorerKind, vectors: &'a WordVectors) -> Self {
        match kind {
            ScorerKind::SumPool => SimilarityScorer::SumPool(vectors),
            ScorerKind::HeuristicMax => SimilarityScorer::HeuristicMax(vectors),
            ScorerKind::HeuristicAvg => SimilarityScorer::HeuristicAvg(vectors),
            ScorerKind::TfIdf => panic!("tf-idf scorer needs IdfStats"),
        }
    }

    pub fn kind(&self) -> ScorerKind {
        match self {
            SimilarityScorer::TfIdf(_) => ScorerKind::TfIdf,
            SimilarityScorer::SumPool(_) => ScorerKind::SumPool,
            SimilarityScorer::HeuristicMax(_) => ScorerKind::HeuristicMax,
            SimilarityScorer::HeuristicAvg(_) => ScorerKind::HeuristicAvg,
        }
    }

    /// Similarity of `first` (the earlier utterance) to `second`.
    pub fn score<S: AsRef<str>>(&self, first: &[S], second: &[S]) -> f64 {
        match *self {
            SimilarityScorer::TfIdf(stats) => sim_tfidf(first, second, stats),
            SimilarityScorer::SumPool(v) => sim_sum_pool(first, second, v),
            SimilarityScorer::HeuristicMax(v) => sim_heuristic_max(first, second, v),
            SimilarityScorer::HeuristicAvg(v) => sim_heuristic_avg(first, second, v),
        }
    }
}
