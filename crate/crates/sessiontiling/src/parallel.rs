//! Lock-free multi-worker training.
//!
//! Workers share the parameters through relaxed atomic loads and stores and
//! may overwrite each other's updates; sparse CBOW updates make such
//! collisions rare. With one thread the deterministic core trainer runs
//! instead.

use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use log::info;
use sessiontiling_core::corpus::PairCorpus;
use sessiontiling_core::embeddings::{
    train_unit, train_with, EmbeddingModel, EpochStats, ParamStore, Scratch, StepClock, Trainer,
};

use crate::Result;

struct SharedParams<'a>(&'a [AtomicU64]);

impl ParamStore for SharedParams<'_> {
    #[inline]
    fn get(&self, i: usize) -> f64 {
        f64::from_bits(self.0[i].load(Ordering::Relaxed))
    }

    #[inline]
    fn add(&mut self, i: usize, delta: f64) {
        let v = self.get(i) + delta;
        self.0[i].store(v.to_bits(), Ordering::Relaxed);
    }
}

struct SharedClock<'a>(&'a AtomicU64);

impl StepClock for SharedClock<'_> {
    #[inline]
    fn tick(&mut self) -> u64 {
        self.0.fetch_add(1, Ordering::Relaxed)
    }
}

fn to_atomic(values: &[f64]) -> Vec<AtomicU64> {
    values.iter().map(|v| AtomicU64::new(v.to_bits())).collect()
}

fn from_atomic(values: Vec<AtomicU64>) -> Vec<f64> {
    values
        .into_iter()
        .map(|v| f64::from_bits(v.into_inner()))
        .collect()
}

/// Trains with `config.threads` workers, reporting each finished epoch.
pub fn train_with_progress<F: FnMut(&EpochStats)>(
    corpus: &PairCorpus,
    config: sessiontiling_core::embeddings::TrainConfig,
    mut on_epoch: F,
) -> Result<EmbeddingModel> {
    if config.threads <= 1 {
        return Ok(train_with(corpus, config, on_epoch)?);
    }
    let trainer = Trainer::new(corpus, config.clone())?;
    let (input, nodes) = trainer.parameters();
    let (input, nodes) = (to_atomic(input), to_atomic(nodes));
    let step = AtomicU64::new(0);
    let schedule = trainer.schedule();
    let units = trainer.units();
    let chunk = units.len().div_ceil(config.threads).max(1);
    for epoch in 1..=config.epochs {
        let (log_prob_sum, targets) = thread::scope(|s| {
            let workers: Vec<_> = units
                .chunks(chunk)
                .map(|part| {
                    let (input, nodes, step) = (&input, &nodes, &step);
                    let (tree, config) = (trainer.tree(), &config);
                    s.spawn(move || {
                        let mut scratch = Scratch::default();
                        let (mut lp, mut n) = (0.0, 0u64);
                        for unit in part {
                            let st = train_unit(
                                unit,
                                tree,
                                config.strategy,
                                config.dim,
                                &mut SharedParams(input),
                                &mut SharedParams(nodes),
                                &schedule,
                                &mut SharedClock(step),
                                &mut scratch,
                            );
                            lp += st.log_prob_sum;
                            n += st.targets;
                        }
                        (lp, n)
                    })
                })
                .collect();
            workers
                .into_iter()
                .map(|w| w.join().expect("training worker panicked"))
                .fold((0.0, 0u64), |a, b| (a.0 + b.0, a.1 + b.1))
        });
        on_epoch(&EpochStats {
            epoch,
            mean_loss: -log_prob_sum / targets.max(1) as f64,
            lr: schedule.at(step.load(Ordering::Relaxed)),
            targets,
        });
    }
    let vocab = trainer.vocab().clone();
    Ok(EmbeddingModel::from_parts(
        vocab,
        config.dim,
        from_atomic(input),
        from_atomic(nodes),
    )?)
}

/// [`train_with_progress`] logging one line per epoch at info level.
pub fn train(
    corpus: &PairCorpus,
    config: sessiontiling_core::embeddings::TrainConfig,
) -> Result<EmbeddingModel> {
    train_with_progress(corpus, config, |s| {
        info!(
            "epoch {} mean loss {:.4} lr {:.6} targets {}",
            s.epoch, s.mean_loss, s.lr, s.targets
        );
    })
}
