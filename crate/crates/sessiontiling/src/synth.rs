//! Synthetic topical dialogue.
//!
//! Each topic owns a disjoint set of core words. Every core word has exactly
//! one synonym that belongs to the same topic and never shares its surface
//! form. Function words are shared by all topics. Pairs and sessions come
//! from the same distribution, so a model trained on [`Generator::pair_corpus`]
//! matches the sessions it segments.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sessiontiling_core::corpus::{tokenize, PairCorpus, Role, Session, Utterance};

/// Where synonym forms may appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynonymPlacement {
    /// Each content word is replaced by its synonym independently.
    Anywhere,
    /// Queries use canonical forms only. A reply uses synonym forms for all
    /// its content words or for none, so a word and its synonym meet only
    /// across the query/reply boundary.
    AcrossTurns,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub topics: usize,
    pub core_words: usize,
    pub function_words: usize,
    /// Content words per utterance.
    pub content_len: RangeInclusive<usize>,
    /// Function words per utterance.
    pub function_len: RangeInclusive<usize>,
    /// Probability of a synonym replacing a content word (per word for
    /// [`SynonymPlacement::Anywhere`], per reply for `AcrossTurns`).
    pub synonym_rate: f64,
    pub placement: SynonymPlacement,
    pub topics_per_session: RangeInclusive<usize>,
    /// Utterances per topic segment.
    pub segment_len: RangeInclusive<usize>,
    /// Word rank `k` is drawn with weight `1/(k+1)^s` within a topic and
    /// among function words; 0 draws uniformly.
    pub zipf_exponent: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            topics: 8,
            core_words: 20,
            function_words: 12,
            content_len: 3..=6,
            function_len: 1..=3,
            synonym_rate: 0.3,
            placement: SynonymPlacement::Anywhere,
            topics_per_session: 2..=3,
            segment_len: 4..=8,
            zipf_exponent: 1.0,
        }
    }
}

impl SynthConfig {
    /// No synonyms and no function words.
    pub fn clean() -> Self {
        SynthConfig {
            function_words: 0,
            function_len: 0..=0,
            synonym_rate: 0.0,
            ..SynthConfig::default()
        }
    }

    fn validate(&self) {
        assert!(
            self.topics >= *self.topics_per_session.end(),
            "not enough topics"
        );
        assert!(
            *self.topics_per_session.start() >= 1,
            "sessions need a topic"
        );
        assert!(self.core_words >= 1 && *self.content_len.start() >= 1);
        assert!(*self.segment_len.start() >= 1);
        assert!(self.function_words > 0 || *self.function_len.end() == 0);
        assert!((0.0..=1.0).contains(&self.synonym_rate));
        assert!(self.zipf_exponent >= 0.0 && self.zipf_exponent.is_finite());
    }
}

pub fn core_word(topic: usize, k: usize) -> String {
    format!("t{topic}c{k}")
}

pub fn synonym(topic: usize, k: usize) -> String {
    format!("t{topic}s{k}")
}

pub fn function_word(k: usize) -> String {
    format!("f{k}")
}

#[derive(Debug, Clone)]
pub struct Generator {
    config: SynthConfig,
    rng: ChaCha8Rng,
    core_rank: WeightedIndex<f64>,
    function_rank: Option<WeightedIndex<f64>>,
}

fn zipf(n: usize, s: f64) -> WeightedIndex<f64> {
    WeightedIndex::new((1..=n).map(|k| (k as f64).powf(-s))).expect("positive weights")
}

impl Generator {
    /// Panics on an inconsistent configuration.
    pub fn new(config: SynthConfig, seed: u64) -> Self {
        config.validate();
        Generator {
            core_rank: zipf(config.core_words, config.zipf_exponent),
            function_rank: (config.function_words > 0)
                .then(|| zipf(config.function_words, config.zipf_exponent)),
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
        }
    }

    pub fn config(&self) -> &SynthConfig {
        &self.config
    }

    /// One utterance on `topic`. `synonyms` is `None` for per-word
    /// substitution, or forces all or none of the content words.
    fn utterance(&mut self, topic: usize, synonyms: Option<bool>) -> String {
        let c = &self.config;
        let n = self.rng.gen_range(c.content_len.clone());
        let f = self.rng.gen_range(c.function_len.clone());
        let mut words = Vec::with_capacity(n + f);
        for _ in 0..n {
            let k = self.core_rank.sample(&mut self.rng);
            let syn = synonyms.unwrap_or_else(|| self.rng.gen_bool(c.synonym_rate));
            words.push(if syn {
                synonym(topic, k)
            } else {
                core_word(topic, k)
            });
        }
        for _ in 0..f {
            let at = self.rng.gen_range(0..=words.len());
            let k = self
                .function_rank
                .as_ref()
                .expect("function words")
                .sample(&mut self.rng);
            words.insert(at, function_word(k));
        }
        words.join(" ")
    }

    fn utterance_for(&mut self, topic: usize, role: Role) -> String {
        match (self.config.placement, role) {
            (SynonymPlacement::Anywhere, _) => self.utterance(topic, None),
            (SynonymPlacement::AcrossTurns, Role::Query) => self.utterance(topic, Some(false)),
            (SynonymPlacement::AcrossTurns, Role::Reply) => {
                let syn = self.rng.gen_bool(self.config.synonym_rate);
                self.utterance(topic, Some(syn))
            }
        }
    }

    /// A query and reply on one random topic.
    pub fn pair(&mut self) -> (String, String) {
        let topic = self.rng.gen_range(0..self.config.topics);
        let q = self.utterance_for(topic, Role::Query);
        let r = self.utterance_for(topic, Role::Reply);
        (q, r)
    }

    /// Pairs until the corpus holds at least `min_tokens` tokens.
    pub fn pair_lines(&mut self, min_tokens: usize) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut tokens = 0;
        while tokens < min_tokens {
            let (q, r) = self.pair();
            tokens += q.split(' ').count() + r.split(' ').count();
            out.push((q, r));
        }
        out
    }

    pub fn pair_corpus(&mut self, min_tokens: usize) -> PairCorpus {
        self.pair_lines(min_tokens)
            .into_iter()
            .map(|(q, r)| (tokenize(&q), tokenize(&r)))
            .collect()
    }

    /// A session of consecutive single-topic segments on distinct topics,
    /// with a gold boundary after each segment but the last.
    pub fn session(&mut self) -> Session {
        let c = self.config.clone();
        let k = self.rng.gen_range(c.topics_per_session.clone());
        let all: Vec<usize> = (0..c.topics).collect();
        let topics: Vec<usize> = all.choose_multiple(&mut self.rng, k).copied().collect();
        let mut utterances = Vec::new();
        let mut gold = BTreeSet::new();
        let mut role = Role::Query;
        for (i, &topic) in topics.iter().enumerate() {
            let len = self.rng.gen_range(c.segment_len.clone());
            for _ in 0..len {
                let raw = self.utterance_for(topic, role);
                utterances.push(Utterance::new(utterances.len(), role, raw));
                role = role.other();
            }
            if i + 1 < topics.len() {
                gold.insert(utterances.len() - 1);
            }
        }
        Session::new(utterances, gold).expect("generated sessions are valid")
    }

    pub fn sessions(&mut self, count: usize) -> Vec<Session> {
        (0..count).map(|_| self.session()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topic_of(word: &str) -> Option<usize> {
        let rest = word.strip_prefix('t')?;
        let end = rest.find(['c', 's'])?;
        rest[..end].parse().ok()
    }

    #[test]
    fn segments_are_single_topic() {
        let mut g = Generator::new(SynthConfig::default(), 5);
        for s in g.sessions(30) {
            let gold = s.gold_boundaries();
            assert!((1..=2).contains(&gold.len()));
            let mut seg_topics = Vec::new();
            let mut current = BTreeSet::new();
            for u in s.utterances() {
                current.extend(u.tokens.iter().filter_map(|w| topic_of(w)));
                if gold.contains(&u.index) || u.index + 1 == s.len() {
                    assert_eq!(current.len(), 1, "{current:?}");
                    seg_topics.push(*current.first().unwrap());
                    current.clear();
                }
            }
            let distinct: BTreeSet<_> = seg_topics.iter().collect();
            assert_eq!(distinct.len(), seg_topics.len());
        }
    }

    #[test]
    fn synonym_rate_is_respected() {
        let mut g = Generator::new(SynthConfig::default(), 9);
        let corpus = g.pair_corpus(50_000);
        assert!(corpus.token_count() >= 50_000);
        let content: Vec<&String> = corpus.tokens().filter(|w| w.starts_with('t')).collect();
        let syn = content.iter().filter(|w| w.contains('s')).count() as f64;
        let rate = syn / content.len() as f64;
        assert!((rate - 0.3).abs() < 0.02, "{rate}");
    }

    #[test]
    fn across_turns_never_mixes_forms_in_one_sentence() {
        let config = SynthConfig {
            placement: SynonymPlacement::AcrossTurns,
            ..SynthConfig::default()
        };
        let mut g = Generator::new(config, 2);
        let mut mixed_pairs = 0;
        for (q, r) in g.pair_corpus(20_000).pairs() {
            let forms = |s: &[String]| -> BTreeSet<bool> {
                s.iter()
                    .filter(|w| w.starts_with('t'))
                    .map(|w| w.contains('s'))
                    .collect()
            };
            assert_eq!(forms(q), BTreeSet::from([false]));
            assert_eq!(forms(r).len(), 1);
            mixed_pairs += usize::from(forms(r).contains(&true));
        }
        assert!(mixed_pairs > 0);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = Generator::new(SynthConfig::default(), 1).sessions(5);
        let b = Generator::new(SynthConfig::default(), 1).sessions(5);
        let c = Generator::new(SynthConfig::default(), 2).sessions(5);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn clean_config_has_no_noise() {
        let mut g = Generator::new(SynthConfig::clean(), 4);
        let (q, r) = g.pair();
        assert!(q.split(' ').chain(r.split(' ')).all(|w| w.contains('c')));
    }
}
