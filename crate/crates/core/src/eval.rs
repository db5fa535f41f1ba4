//! Boundary-level evaluation, the random prior baseline and α tuning.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Session;
use crate::similarity::SimilarityScorer;
use crate::tiling::{segment_profile, similarity_profile, SegmenterConfig};
use crate::{Error, Result};

pub type Boundaries = BTreeSet<usize>;

/// Micro-averaged precision, recall and F over pooled counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub true_positives: usize,
    pub predicted: usize,
    pub gold: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl EvalReport {
    pub fn from_counts(true_positives: usize, predicted: usize, gold: usize) -> Self {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(true_positives, predicted);
        let recall = ratio(true_positives, gold);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        EvalReport {
            true_positives,
            predicted,
            gold,
            precision,
            recall,
            f1,
        }
    }
}

/// Exact gap matching, counts pooled over all sessions.
pub fn boundary_prf(predicted: &[Boundaries], gold: &[Boundaries]) -> Result<EvalReport> {
    boundary_prf_with_tolerance(predicted, gold, 0)
}

/// Like [`boundary_prf`], but a predicted boundary within `tolerance` gaps
/// of a not-yet-matched gold boundary counts as a hit. Each gold boundary
/// matches at most once; exact hits are taken first, then the nearest.
pub fn boundary_prf_with_tolerance(
    predicted: &[Boundaries],
    gold: &[Boundaries],
    tolerance: usize,
) -> Result<EvalReport> {
    if predicted.len() != gold.len() {
        return Err(Error::SessionCountMismatch {
            predicted: predicted.len(),
            gold: gold.len(),
        });
    }
    let mut tp = 0;
    for (p, g) in predicted.iter().zip(gold) {
        tp += matches_within(p, g, tolerance);
    }
    let n_pred = predicted.iter().map(BTreeSet::len).sum();
    let n_gold = gold.iter().map(BTreeSet::len).sum();
    Ok(EvalReport::from_counts(tp, n_pred, n_gold))
}

fn matches_within(predicted: &Boundaries, gold: &Boundaries, tolerance: usize) -> usize {
    let exact: Vec<usize> = predicted.intersection(gold).copied().collect();
    if tolerance == 0 {
        return exact.len();
    }
    let mut free_gold: BTreeSet<usize> = gold.difference(predicted).copied().collect();
    let mut hits = exact.len();
    for &p in predicted.difference(gold) {
        let lo = p.saturating_sub(tolerance);
        let nearest = free_gold
            .range(lo..=p + tolerance)
            .min_by_key(|&&g| (g.abs_diff(p), g))
            .copied();
        if let Some(g) = nearest {
            free_gold.remove(&g);
            hits += 1;
        }
    }
    hits
}

/// Gold boundaries per gap over the given sessions; 0 when there are no gaps.
pub fn prior_probability(sessions: &[Session]) -> f64 {
    let gaps: usize = sessions.iter().map(Session::gap_count).sum();
    let gold: usize = sessions.iter().map(|s| s.gold_boundaries().len()).sum();
    if gaps == 0 {
        0.0
    } else {
        gold as f64 / gaps as f64
    }
}

/// Marks each gap independently as a boundary with probability `prior`.
pub fn random_baseline(sessions: &[Session], prior: f64, seed: u64) -> Result<Vec<Boundaries>> {
    if !(0.0..=1.0).contains(&prior) {
        return Err(Error::InvalidConfig("prior must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sessions
        .iter()
        .map(|s| {
            (0..s.gap_count())
                .filter(|_| rng.gen::<f64>() < prior)
                .collect()
        })
        .collect())
}

/// Candidate α values, `start + i·step` for `i = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub start: f64,
    pub step: f64,
    pub steps: usize,
}

impl Default for AlphaGrid {
    /// −1.0 to 2.0 in steps of 0.1.
    fn default() -> Self {
        AlphaGrid {
            start: -1.0,
            step: 0.1,
            steps: 30,
        }
    }
}

impl AlphaGrid {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        // integer tenths avoid accumulating 0.1 steps
        (0..=self.steps).map(|i| {
            let x = self.start + i as f64 * self.step;
            libm::round(x * 1e9) / 1e9
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaChoice {
    pub alpha: f64,
    /// `|predicted − gold|` at the chosen α.
    pub objective: usize,
    pub predicted: usize,
    pub gold: usize,
}

/// Picks the grid α whose total predicted boundary count is closest to the
/// gold count; ties go to the larger α.
///
/// Sessions without gaps are ignored. Fails with
/// [`Error::NoGoldBoundaries`] when no session has a gap to annotate.
pub fn tune_alpha(
    sessions: &[Session],
    scorer: &SimilarityScorer<'_>,
    base: &SegmenterConfig,
    grid: &AlphaGrid,
) -> Result<AlphaChoice> {
    base.validate()?;
    let mut profiles = Vec::new();
    let mut gold = 0;
    for s in sessions.iter().filter(|s| s.len() >= 2) {
        profiles.push(similarity_profile(s, scorer)?);
        gold += s.gold_boundaries().len();
    }
    if profiles.is_empty() {
        return Err(Error::NoGoldBoundaries);
    }
    let mut best: Option<AlphaChoice> = None;
    for alpha in grid.values() {
        let config = base.with_alpha(alpha);
        let predicted: usize = profiles
            .iter()
            .map(|p| segment_profile(p, &config).boundaries.len())
            .sum();
        let objective = predicted.abs_diff(gold);
        if best.is_none_or(|b| objective <= b.objective) {
            best = Some(AlphaChoice {
                alpha,
                objective,
                predicted,
                gold,
            });
        }
    }
    best.ok_or(Error::InvalidConfig("alpha grid is empty"))
}
