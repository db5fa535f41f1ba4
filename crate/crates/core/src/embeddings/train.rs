use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_huffman, EmbeddingModel, HuffmanTree, Strategy, TrainConfig, Unit};
use crate::corpus::{build_vocab, PairCorpus, Vocabulary};
use crate::math::{log_sigmoid, sigmoid};
use crate::{Error, Result};

/// Flat parameter storage the update kernel reads and writes.
///
/// Plain slices serve the single-threaded trainer; the `sessiontiling` crate
/// provides a shared atomic store for lock-free multi-worker training.
pub trait ParamStore {
    fn get(&self, i: usize) -> f64;
    fn add(&mut self, i: usize, delta: f64);
}

impl ParamStore for [f64] {
    #[inline]
    fn get(&self, i: usize) -> f64 {
        self[i]
    }

    #[inline]
    fn add(&mut self, i: usize, delta: f64) {
        self[i] += delta;
    }
}

/// Source of global step numbers for the learning-rate schedule.
pub trait StepClock {
    /// Returns the current step and advances by one.
    fn tick(&mut self) -> u64;
}

impl StepClock for u64 {
    #[inline]
    fn tick(&mut self) -> u64 {
        let s = *self;
        *self += 1;
        s
    }
}

/// Linear decay from `initial` to `initial / 10` over `total_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrSchedule {
    pub initial: f64,
    pub total_steps: u64,
}

impl LrSchedule {
    pub fn at(&self, step: u64) -> f64 {
        let progress = if self.total_steps == 0 {
            1.0
        } else {
            (step as f64 / self.total_steps as f64).min(1.0)
        };
        self.initial * (1.0 - 0.9 * progress)
    }
}

/// Reusable buffers for [`train_unit`].
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    context: Vec<u32>,
    hidden: Vec<f64>,
    grad: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UnitStats {
    pub log_prob_sum: f64,
    pub targets: u64,
}

/// One stochastic-gradient-ascent pass over every target of `unit`.
///
/// Every in-vocabulary position ticks the clock, including those skipped for
/// lack of context. Returns the log-probabilities observed before each
/// update.
#[allow(clippy::too_many_arguments)]
pub fn train_unit<I, N, C>(
    unit: &Unit,
    tree: &HuffmanTree,
    strategy: Strategy,
    dim: usize,
    input: &mut I,
    nodes: &mut N,
    schedule: &LrSchedule,
    clock: &mut C,
    scratch: &mut Scratch,
) -> UnitStats
where
    I: ParamStore + ?Sized,
    N: ParamStore + ?Sized,
    C: StepClock + ?Sized,
{
    let mut stats = UnitStats::default();
    scratch.hidden.resize(dim, 0.0);
    scratch.grad.resize(dim, 0.0);
    for t in 0..unit.len() {
        let lr = schedule.at(clock.tick());
        unit.context_ids(strategy, t, &mut scratch.context);
        if scratch.context.is_empty() {
            continue;
        }
        let target = unit.ids()[t];
        stats.log_prob_sum += update_target(
            target,
            &scratch.context,
            tree,
            dim,
            input,
            nodes,
            lr,
            &mut scratch.hidden,
            &mut scratch.grad,
        );
        stats.targets += 1;
    }
    stats
}

/// One ascent step on `ln p(target | Σ u_context)`. Returns the
/// log-probability before the update.
#[allow(clippy::too_many_arguments)]
pub(crate) fn update_target<I, N>(
    target: u32,
    context: &[u32],
    tree: &HuffmanTree,
    dim: usize,
    input: &mut I,
    nodes: &mut N,
    lr: f64,
    hidden: &mut [f64],
    grad: &mut [f64],
) -> f64
where
    I: ParamStore + ?Sized,
    N: ParamStore + ?Sized,
{
    hidden.fill(0.0);
    grad.fill(0.0);
    for &w in context {
        let base = w as usize * dim;
        for (k, h) in hidden.iter_mut().enumerate() {
            *h += input.get(base + k);
        }
    }
    let mut log_prob = 0.0;
    for (&n, &bit) in tree.path(target).iter().zip(tree.code(target)) {
        let base = n as usize * dim;
        let mut f = 0.0;
        for (k, h) in hidden.iter().enumerate() {
            f += nodes.get(base + k) * h;
        }
        log_prob += log_sigmoid(if bit { -f } else { f });
        // ascent direction of ln σ(±f)
        let g = if bit { 0.0 } else { 1.0 } - sigmoid(f);
        for (k, (gk, h)) in grad.iter_mut().zip(hidden.iter()).enumerate() {
            *gk += g * nodes.get(base + k);
            nodes.add(base + k, lr * g * h);
        }
    }
    for &w in context {
        let base = w as usize * dim;
        for (k, gk) in grad.iter().enumerate() {
            input.add(base + k, lr * gk);
        }
    }
    log_prob
}

/// Seeded initial parameters: input vectors uniform in `[-0.5/dim, 0.5/dim]`,
/// inner-node vectors zero.
pub fn init_parameters(vocab_len: usize, dim: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input = (0..vocab_len * dim)
        .map(|_| (rng.gen::<f64>() - 0.5) / dim as f64)
        .collect();
    let nodes = vec![0.0; vocab_len.saturating_sub(1) * dim];
    (input, nodes)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    /// 1-based.
    pub epoch: usize,
    /// Mean `-ln p(w_t|c_t)` over the targets of this epoch, measured before
    /// each update.
    pub mean_loss: f64,
    /// Learning rate at the end of the epoch.
    pub lr: f64,
    pub targets: u64,
}

/// Single-threaded CBOW trainer. Bit-reproducible for a fixed seed.
#[derive(Debug, Clone)]
pub struct Trainer {
    config: TrainConfig,
    vocab: Vocabulary,
    tree: HuffmanTree,
    units: Vec<Unit>,
    input: Vec<f64>,
    nodes: Vec<f64>,
    schedule: LrSchedule,
    step: u64,
    epochs_done: usize,
    scratch: Scratch,
}

impl Trainer {
    pub fn new(corpus: &PairCorpus, config: TrainConfig) -> Result<Self> {
        config.validate()?;
        let vocab = build_vocab(corpus, config.min_count)?;
        let tree = build_huffman(&vocab)?;
        let units: Vec<Unit> = corpus
            .pairs()
            .iter()
            .map(|(q, r)| Unit::encode(&vocab, q, r))
            .filter(|u| !u.is_empty())
            .collect();
        let trainable = units.iter().any(|u| {
            (0..u.len()).any(|t| u.context_positions(config.strategy, t).next().is_some())
        });
        if !trainable {
            return Err(Error::NoTrainableTokens);
        }
        let tokens: u64 = units.iter().map(|u| u.len() as u64).sum();
        let schedule = LrSchedule {
            initial: config.initial_lr,
            total_steps: tokens * config.epochs as u64,
        };
        let (input, nodes) = init_parameters(vocab.len(), config.dim, config.seed);
        Ok(Trainer {
            config,
            vocab,
            tree,
            units,
            input,
            nodes,
            schedule,
            step: 0,
            epochs_done: 0,
            scratch: Scratch::default(),
        })
    }

    pub fn run_epoch(&mut self) -> EpochStats {
        let mut total = UnitStats::default();
        for unit in &self.units {
            let s = train_unit(
                unit,
                &self.tree,
                self.config.strategy,
                self.config.dim,
                self.input.as_mut_slice(),
                self.nodes.as_mut_slice(),
                &self.schedule,
                &mut self.step,
                &mut self.scratch,
            );
            total.log_prob_sum += s.log_prob_sum;
            total.targets += s.targets;
        }
        self.epochs_done += 1;
        EpochStats {
            epoch: self.epochs_done,
            mean_loss: -total.log_prob_sum / total.targets.max(1) as f64,
            lr: self.schedule.at(self.step),
            targets: total.targets,
        }
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn tree(&self) -> &HuffmanTree {
        &self.tree
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn schedule(&self) -> LrSchedule {
        self.schedule
    }

    pub fn epochs_done(&self) -> usize {
        self.epochs_done
    }

    /// Current parameters as `(input, nodes)`.
    pub fn parameters(&self) -> (&[f64], &[f64]) {
        (&self.input, &self.nodes)
    }

    pub fn snapshot(&self) -> EmbeddingModel {
        self.clone().into_model()
    }

    pub fn into_model(self) -> EmbeddingModel {
        EmbeddingModel {
            vocab: self.vocab,
            tree: self.tree,
            dim: self.config.dim,
            input: self.input,
            nodes: self.nodes,
        }
    }
}

/// Trains for `config.epochs` epochs on a single thread, reporting each
/// finished epoch to `on_epoch`.
pub fn train_with<F: FnMut(&EpochStats)>(
    corpus: &PairCorpus,
    config: TrainConfig,
    mut on_epoch: F,
) -> Result<EmbeddingModel> {
    let mut trainer = Trainer::new(corpus, config)?;
    for _ in 0..trainer.config.epochs {
        let stats = trainer.run_epoch();
        on_epoch(&stats);
    }
    Ok(trainer.into_model())
}

pub fn train(corpus: &PairCorpus, config: TrainConfig) -> Result<EmbeddingModel> {
    train_with(corpus, config, |_| {})
}
