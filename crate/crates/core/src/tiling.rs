//! TextTiling over utterance similarities.
//!
//! Gap `i` sits between utterances `i` and `i + 1`. Its similarity is the
//! scorer applied to the two utterances; its depth measures how far it lies
//! below the neighbouring peak(s). A gap is a boundary when its depth exceeds
//! `μ + α·σ` of the depth distribution.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Session, Utterance};
use crate::math::sqrt;
use crate::similarity::SimilarityScorer;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Two-sided depths over the whole session.
    Offline,
    /// Left-only depths as utterances arrive.
    Online,
}

/// Where the online segmenter takes `μ` and `σ` from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OnlineStats {
    /// Running statistics over the depths seen so far in the stream.
    Running,
    /// Fixed statistics, e.g. measured on a validation set.
    Fixed { mu: f64, sigma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmenterConfig {
    pub alpha: f64,
    pub mode: Mode,
    /// Odd moving-average width; 1 disables smoothing.
    pub smoothing_width: usize,
    /// Depths that must be observed before the online segmenter may emit.
    pub min_gaps_online: usize,
    pub online_stats: OnlineStats,
    /// Minimum utterances per segment; 1 imposes nothing.
    pub min_segment_len: usize,
}

impl SegmenterConfig {
    pub fn offline(alpha: f64) -> Self {
        SegmenterConfig {
            alpha,
            mode: Mode::Offline,
            smoothing_width: 1,
            min_gaps_online: 3,
            online_stats: OnlineStats::Running,
            min_segment_len: 1,
        }
    }

    pub fn online(alpha: f64) -> Self {
        SegmenterConfig {
            mode: Mode::Online,
            smoothing_width: 1,
            ..Self::offline(alpha)
        }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        SegmenterConfig {
            alpha,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_nan() {
            return Err(Error::InvalidConfig("alpha must not be NaN"));
        }
        if self.smoothing_width == 0 || self.smoothing_width.is_multiple_of(2) {
            return Err(Error::InvalidConfig("smoothing width must be odd"));
        }
        if self.mode == Mode::Online && self.smoothing_width != 1 {
            return Err(Error::InvalidConfig(
                "online mode cannot use centered smoothing (width must be 1)",
            ));
        }
        if self.min_gaps_online == 0 {
            return Err(Error::InvalidConfig("min_gaps_online must be at least 1"));
        }
        if self.min_segment_len == 0 {
            return Err(Error::InvalidConfig("min_segment_len must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        Self::offline(0.5)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthProfile {
    /// Raw per-gap similarities.
    pub sims: Vec<f64>,
    /// Similarities after smoothing; depths are computed on these.
    pub smoothed: Vec<f64>,
    pub depths: Vec<f64>,
    pub mu: f64,
    /// Population standard deviation.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub boundaries: BTreeSet<usize>,
    pub profile: DepthProfile,
}

/// Similarity of every adjacent utterance pair, earlier utterance first.
pub fn similarity_profile(session: &Session, scorer: &SimilarityScorer<'_>) -> Result<Vec<f64>> {
    let utts = session.utterances();
    if utts.len() < 2 {
        return Err(Error::TooShort {
            utterances: utts.len(),
        });
    }
    Ok(utts
        .windows(2)
        .map(|w| scorer.score(&w[0].tokens, &w[1].tokens))
        .collect())
}

/// Centered moving average; the window is truncated at the edges.
///
/// # Panics
/// If `width` is even.
pub fn smooth(profile: &[f64], width: usize) -> Vec<f64> {
    assert!(!width.is_multiple_of(2), "smoothing width must be odd");
    let half = width / 2;
    (0..profile.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(profile.len());
            profile[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Height of the left peak above gap `i`: scan left while values do not
/// decrease, stop at the first strict decrease.
pub fn left_depth(profile: &[f64], i: usize) -> f64 {
    let mut j = i;
    while j > 0 && profile[j - 1] >= profile[j] {
        j -= 1;
    }
    profile[j] - profile[i]
}

pub fn right_depth(profile: &[f64], i: usize) -> f64 {
    let mut j = i;
    while j + 1 < profile.len() && profile[j + 1] >= profile[j] {
        j += 1;
    }
    profile[j] - profile[i]
}

/// Two-sided valley depth at gap `i`.
pub fn depth_offline(profile: &[f64], i: usize) -> f64 {
    left_depth(profile, i) + right_depth(profile, i)
}

/// Left-only depth of the newest gap of a stream prefix.
///
/// # Panics
/// If `prefix` is empty.
pub fn depth_online(prefix: &[f64]) -> f64 {
    left_depth(prefix, prefix.len() - 1)
}

/// Mean and population standard deviation; `(0, 0)` for no values.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|d| (d - mu) * (d - mu)).sum::<f64>() / n;
    (mu, sqrt(var))
}

pub fn cutoff(mu: f64, sigma: f64, alpha: f64) -> f64 {
    mu + alpha * sigma
}

/// Gaps whose depth strictly exceeds `cutoff(α)`, the deepest first when a
/// minimum segment length forces a choice.
pub fn select_boundaries(depths: &[f64], alpha: f64, min_segment_len: usize) -> BTreeSet<usize> {
    let (mu, sigma) = mean_std(depths);
    let threshold = cutoff(mu, sigma, alpha);
    let mut candidates: Vec<usize> = (0..depths.len())
        .filter(|&i| depths[i] > threshold)
        .collect();
    if min_segment_len <= 1 {
        return candidates.into_iter().collect();
    }
    candidates.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(a.cmp(&b)));
    let last_utterance = depths.len();
    let mut chosen = BTreeSet::new();
    for g in candidates {
        // segments on either side run from the neighbouring boundary to g
        let prev = chosen.range(..g).next_back().map_or(-1, |&p| p as isize);
        let next = chosen.range(g..).next().map_or(last_utterance, |&n| n);
        if g as isize - prev >= min_segment_len as isize && next - g >= min_segment_len {
            chosen.insert(g);
        }
    }
    chosen
}

/// Offline TextTiling on a precomputed similarity profile.
pub fn segment_profile_offline(sims: &[f64], config: &SegmenterConfig) -> SegmentationResult {
    let smoothed = smooth(sims, config.smoothing_width);
    let depths: Vec<f64> = (0..smoothed.len())
        .map(|i| depth_offline(&smoothed, i))
        .collect();
    let boundaries = select_boundaries(&depths, config.alpha, config.min_segment_len);
    let (mu, sigma) = mean_std(&depths);
    SegmentationResult {
        boundaries,
        profile: DepthProfile {
            sims: sims.to_vec(),
            smoothed,
            depths,
            mu,
            sigma,
        },
    }
}

/// Replays a similarity profile through the online decision rule, gap by
/// gap. Produces the same boundaries as feeding the utterances to an
/// [`OnlineSegmenter`].
pub fn segment_profile_online(sims: &[f64], config: &SegmenterConfig) -> SegmentationResult {
    let mut state = OnlineState::default();
    let mut boundaries = BTreeSet::new();
    for &s in sims {
        if let Some(event) = state.push_similarity(s, config) {
            boundaries.insert(event.gap);
        }
    }
    let (mu, sigma) = (state.stats.mean(), state.stats.std());
    SegmentationResult {
        boundaries,
        profile: DepthProfile {
            sims: sims.to_vec(),
            smoothed: sims.to_vec(),
            depths: state.depths,
            mu,
            sigma,
        },
    }
}

pub fn segment_profile(sims: &[f64], config: &SegmenterConfig) -> SegmentationResult {
    match config.mode {
        Mode::Offline => segment_profile_offline(sims, config),
        Mode::Online => segment_profile_online(sims, config),
    }
}

/// Offline segmentation: profile, smoothing, two-sided depths, and the
/// per-session cutoff.
pub fn segment_offline(
    session: &Session,
    scorer: &SimilarityScorer<'_>,
    config: &SegmenterConfig,
) -> Result<SegmentationResult> {
    config.validate()?;
    let sims = similarity_profile(session, scorer)?;
    Ok(segment_profile_offline(&sims, config))
}

/// Segments a whole session in the configured mode.
pub fn segment(
    session: &Session,
    scorer: &SimilarityScorer<'_>,
    config: &SegmenterConfig,
) -> Result<SegmentationResult> {
    config.validate()?;
    let sims = similarity_profile(session, scorer)?;
    Ok(segment_profile(&sims, config))
}

/// Welford running mean and population variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn mean(&self) -> f64 {
        self.mean
    }

    fn std(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            sqrt((self.m2 / self.count as f64).max(0.0))
        }
    }
}

/// A boundary detected at the newest gap of a stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEvent {
    pub gap: usize,
    pub similarity: f64,
    pub depth: f64,
    pub cutoff: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct OnlineState {
    sims: Vec<f64>,
    depths: Vec<f64>,
    stats: RunningStats,
    last_boundary: Option<usize>,
}

impl OnlineState {
    fn push_similarity(&mut self, sim: f64, config: &SegmenterConfig) -> Option<BoundaryEvent> {
        self.sims.push(sim);
        let gap = self.sims.len() - 1;
        let depth = depth_online(&self.sims);
        self.depths.push(depth);
        self.stats.push(depth);
        let threshold = match config.online_stats {
            OnlineStats::Running => cutoff(self.stats.mean(), self.stats.std(), config.alpha),
            OnlineStats::Fixed { mu, sigma } => cutoff(mu, sigma, config.alpha),
        };
        let warmed_up = self.depths.len() >= config.min_gaps_online;
        // a boundary at gap g closes a segment ending at utterance g
        let seg_start = self.last_boundary.map_or(0, |b| b + 1);
        let long_enough = gap + 1 - seg_start >= config.min_segment_len;
        if warmed_up && depth > threshold && long_enough {
            self.last_boundary = Some(gap);
            Some(BoundaryEvent {
                gap,
                similarity: sim,
                depth,
                cutoff: threshold,
            })
        } else {
            None
        }
    }
}

/// Streaming segmenter for one conversation.
///
/// Each pushed utterance after the first closes a gap; the gap's left-only
/// depth is compared against the cutoff from running statistics once
/// `min_gaps_online` depths have been seen.
#[derive(Debug, Clone)]
pub struct OnlineSegmenter<'a> {
    scorer: SimilarityScorer<'a>,
    config: SegmenterConfig,
    previous: Option<Vec<String>>,
    state: OnlineState,
}

impl<'a> OnlineSegmenter<'a> {
    pub fn new(scorer: SimilarityScorer<'a>, config: SegmenterConfig) -> Result<Self> {
        let config = SegmenterConfig {
            mode: Mode::Online,
            ..config
        };
        config.validate()?;
        Ok(OnlineSegmenter {
            scorer,
            config,
            previous: None,
            state: OnlineState::default(),
        })
    }

    /// Feeds the next utterance's tokens.
    pub fn push<S: AsRef<str>>(&mut self, tokens: &[S]) -> Option<BoundaryEvent> {
        let current: Vec<String> = tokens.iter().map(|t| String::from(t.as_ref())).collect();
        let event = self.previous.as_ref().and_then(|prev| {
            let sim = self.scorer.score(prev, &current);
            self.state.push_similarity(sim, &self.config)
        });
        self.previous = Some(current);
        event
    }

    pub fn push_utterance(&mut self, utterance: &Utterance) -> Option<BoundaryEvent> {
        self.push(&utterance.tokens)
    }

    /// Forgets the conversation so far.
    pub fn reset(&mut self) {
        self.previous = None;
        self.state = OnlineState::default();
    }

    pub fn similarities(&self) -> &[f64] {
        &self.state.sims
    }

    pub fn depths(&self) -> &[f64] {
        &self.state.depths
    }

    pub fn boundaries(&self) -> impl Iterator<Item = usize> + '_ {
        // re-derive from history so callers need not collect events
        let mut replay = OnlineState::default();
        let config = &self.config;
        self.state
            .sims
            .iter()
            .filter_map(move |&s| replay.push_similarity(s, config).map(|e| e.gap))
    }

    pub fn config(&self) -> &SegmenterConfig {
        &self.config
    }
}
