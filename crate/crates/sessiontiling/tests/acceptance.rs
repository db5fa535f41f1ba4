//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sessiontiling::corpus::{PairCorpus, Session, Vocabulary};
use sessiontiling::embeddings::{EmbeddingModel, Strategy, TrainConfig, Trainer, WordVectors};
use sessiontiling::eval::{
    boundary_prf, prior_probability, random_baseline, tune_alpha, AlphaGrid, Boundaries,
};
use sessiontiling::similarity::{
    sim_heuristic_avg, sim_heuristic_max, IdfStats, ScorerKind, SimilarityScorer,
};
use sessiontiling::synth::{Generator, SynonymPlacement, SynthConfig};
use sessiontiling::tiling::{
    depth_offline, left_depth, segment, segment_profile, OnlineSegmenter, SegmenterConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed < limit
}

fn random_vocab(v: usize) -> Vocabulary {
    Vocabulary::from_counts((0..v).map(|i| (format!("w{i}"), (v - i) as u64 * 3 + 1)), 1).unwrap()
}

fn random_model(v: usize, dim: usize, rng: &mut ChaCha8Rng) -> EmbeddingModel {
    let mut m = EmbeddingModel::initialize(random_vocab(v), dim, rng.gen()).unwrap();
    for x in m.input_vectors_mut() {
        *x = rng.gen_range(-0.5..0.5);
    }
    for x in m.node_vectors_mut() {
        *x = rng.gen_range(-0.5..0.5);
    }
    m
}

fn neg_log_prob(m: &EmbeddingModel, target: u32, context: &[u32]) -> f64 {
    -m.predict_prob_id(target, &m.sum_inputs(context))
        .unwrap()
        .ln()
}

/// Input parameters first, then node parameters.
fn param(m: &mut EmbeddingModel, i: usize) -> &mut f64 {
    let n_in = m.input_vectors().len();
    if i < n_in {
        &mut m.input_vectors_mut()[i]
    } else {
        &mut m.node_vectors_mut()[i - n_in]
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mut m = random_model(6, 8, &mut rng);
        let target = rng.gen_range(0..6);
        let context: Vec<u32> = (0..rng.gen_range(1..6))
            .map(|_| rng.gen_range(0..6))
            .collect();
        let grad = m.loss_gradient(target, &context).unwrap();
        let n_in = m.input_vectors().len();
        for i in 0..n_in + m.node_vectors().len() {
            let x = *param(&mut m, i);
            *param(&mut m, i) = x + h;
            let up = neg_log_prob(&m, target, &context);
            *param(&mut m, i) = x - h;
            let down = neg_log_prob(&m, target, &context);
            *param(&mut m, i) = x;
            let fd = (up - down) / (2.0 * h);
            let analytic = if i < n_in {
                grad.input[i]
            } else {
                grad.nodes[i - n_in]
            };
            let err = (analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1e-6);
            worst = worst.max(err);
        }
    }
    let t = start.elapsed();
    outcome(
        worst < 1e-4 && within(Duration::from_secs(5), t),
        format!("max relative error {worst:.2e} over 100 points, {t:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut worst: f64 = 0.0;
    for v in [2, 7, 33, 64] {
        let m = random_model(v, 8, &mut rng);
        for _ in 0..50 {
            let c: Vec<f64> = (0..8).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let total: f64 = (0..v as u32)
                .map(|w| m.predict_prob_id(w, &c).unwrap())
                .sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-9 && within(Duration::from_secs(5), t),
        format!("max |sum p - 1| = {worst:.2e}, {t:.2?}"),
    )
}

fn naive_cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for i in 0..a.len() {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

fn naive_max(s1: &[String], s2: &[String], v: &WordVectors) -> f64 {
    let mut total = 0.0;
    let mut n1 = 0;
    for a in s1.iter().filter_map(|w| v.get(w)) {
        let mut best = f64::NEG_INFINITY;
        for b in s2.iter().filter_map(|w| v.get(w)) {
            best = best.max(naive_cosine(a, b));
        }
        if best == f64::NEG_INFINITY {
            return 0.0;
        }
        total += best;
        n1 += 1;
    }
    if n1 == 0 {
        0.0
    } else {
        total / n1 as f64
    }
}

fn naive_avg(s1: &[String], s2: &[String], v: &WordVectors) -> f64 {
    let mut total = 0.0;
    let mut pairs = 0;
    for a in s1.iter().filter_map(|w| v.get(w)) {
        for b in s2.iter().filter_map(|w| v.get(w)) {
            total += naive_cosine(a, b);
            pairs += 1;
        }
    }
    if pairs == 0 {
        0.0
    } else {
        total / pairs as f64
    }
}

fn random_vectors(words: usize, dim: usize, rng: &mut ChaCha8Rng) -> WordVectors {
    let names = (0..words).map(|i| format!("w{i}")).collect();
    let data = (0..words * dim)
        .map(|_| {
            if rng.gen_bool(0.05) {
                0.0
            } else {
                rng.gen_range(-1.0..1.0)
            }
        })
        .collect();
    WordVectors::new(names, dim, data).unwrap()
}

/// Words `w0..w{vocab+2}`, so a few are out of vocabulary.
fn random_sentence(vocab: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..rng.gen_range(0..=max_len))
        .map(|_| format!("w{}", rng.gen_range(0..vocab + 3)))
        .collect()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let (mut worst, mut asymmetric) = (0.0f64, 0);
    for _ in 0..1000 {
        let dim = rng.gen_range(1..12);
        let v = random_vectors(20, dim, &mut rng);
        let a = random_sentence(20, 8, &mut rng);
        let b = random_sentence(20, 8, &mut rng);
        worst = worst.max((sim_heuristic_max(&a, &b, &v) - naive_max(&a, &b, &v)).abs());
        worst = worst.max((sim_heuristic_avg(&a, &b, &v) - naive_avg(&a, &b, &v)).abs());
        if sim_heuristic_avg(&a, &b, &v).to_bits() != sim_heuristic_avg(&b, &a, &v).to_bits() {
            asymmetric += 1;
        }
    }
    outcome(
        worst <= 1e-12 && asymmetric == 0,
        format!("max deviation {worst:.2e}, {asymmetric} asymmetric heuristic-avg results"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let alphas = [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    let mut violations = 0;
    for k in 0..100 {
        let sims: Vec<f64> = (0..rng.gen_range(1..40))
            .map(|_| rng.gen_range(-0.2..1.0))
            .collect();
        let base = if k % 2 == 0 {
            SegmenterConfig::offline(0.0)
        } else {
            SegmenterConfig::online(0.0)
        };
        let counts: Vec<usize> = alphas
            .iter()
            .map(|&a| segment_profile(&sims, &base.with_alpha(a)).boundaries.len())
            .collect();
        if counts.windows(2).any(|w| w[1] > w[0]) {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{violations} of 100 profiles gained boundaries as alpha grew"),
    )
}

fn random_session(vocab: usize, rng: &mut ChaCha8Rng) -> Session {
    let lines: Vec<String> = (0..rng.gen_range(4..20))
        .map(|_| {
            let mut s = random_sentence(vocab, 6, rng);
            s.push(format!("w{}", rng.gen_range(0..vocab)));
            s.join(" ")
        })
        .collect();
    Session::from_lines(lines, BTreeSet::new()).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let vectors = random_vectors(30, 16, &mut rng);
    let sessions: Vec<Session> = (0..20).map(|_| random_session(30, &mut rng)).collect();
    let kinds = [
        ScorerKind::SumPool,
        ScorerKind::HeuristicMax,
        ScorerKind::HeuristicAvg,
    ];
    let configs = [SegmenterConfig::offline(0.5), SegmenterConfig::online(0.5)];
    let mut changed = 0;
    let mut checked = 0;
    for c in [0.01, 3.0, 1000.0] {
        let mut scaled = vectors.clone();
        scaled.scale(c);
        for kind in kinds {
            let (a, b) = (
                SimilarityScorer::embedding(kind, &vectors),
                SimilarityScorer::embedding(kind, &scaled),
            );
            for config in &configs {
                for s in &sessions {
                    let x = segment(s, &a, config).unwrap().boundaries;
                    let y = segment(s, &b, config).unwrap().boundaries;
                    checked += 1;
                    changed += usize::from(x != y);
                }
            }
        }
    }
    outcome(
        changed == 0,
        format!("{changed} of {checked} boundary sets changed under scaling"),
    )
}

struct Setup {
    validation: Vec<Session>,
    test: Vec<Session>,
    corpus: PairCorpus,
}

fn synthetic_setup(config: SynthConfig, seed: u64) -> Setup {
    let mut g = Generator::new(config, seed);
    Setup {
        corpus: g.pair_corpus(200_000),
        validation: g.sessions(100),
        test: g.sessions(100),
    }
}

fn gold(sessions: &[Session]) -> Vec<Boundaries> {
    sessions
        .iter()
        .map(|s| s.gold_boundaries().clone())
        .collect()
}

/// α tuned on the validation sessions, F1 on the test sessions.
fn tuned_f1(setup: &Setup, scorer: &SimilarityScorer<'_>) -> (f64, f64) {
    let base = SegmenterConfig::offline(0.0);
    let choice = tune_alpha(&setup.validation, scorer, &base, &AlphaGrid::default()).unwrap();
    let config = base.with_alpha(choice.alpha);
    let predicted: Vec<Boundaries> = setup
        .test
        .iter()
        .map(|s| segment(s, scorer, &config).unwrap().boundaries)
        .collect();
    let f1 = boundary_prf(&predicted, &gold(&setup.test)).unwrap().f1;
    (choice.alpha, f1)
}

fn train_config(strategy: Strategy, seed: u64) -> TrainConfig {
    TrainConfig {
        strategy,
        dim: 100,
        epochs: 5,
        initial_lr: 0.025,
        min_count: 5,
        seed,
        threads: 1,
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let setup = synthetic_setup(SynthConfig::default(), 6);
    let model =
        sessiontiling::parallel::train(&setup.corpus, train_config(Strategy::VirtualSentence, 1))
            .unwrap();
    let vectors = model.word_vectors();
    let idf = IdfStats::from_pair_corpus(&setup.corpus);
    let f = |scorer: SimilarityScorer<'_>| tuned_f1(&setup, &scorer);
    let (a_tfidf, tfidf) = f(SimilarityScorer::TfIdf(&idf));
    let (a_sum, sum) = f(SimilarityScorer::embedding(ScorerKind::SumPool, &vectors));
    let (a_max, hmax) = f(SimilarityScorer::embedding(
        ScorerKind::HeuristicMax,
        &vectors,
    ));
    let (a_avg, havg) = f(SimilarityScorer::embedding(
        ScorerKind::HeuristicAvg,
        &vectors,
    ));
    let prior = prior_probability(&setup.validation);
    let random = boundary_prf(
        &random_baseline(&setup.test, prior, 1).unwrap(),
        &gold(&setup.test),
    )
    .unwrap()
    .f1;
    let t = start.elapsed();
    let pass = sum.max(hmax) > tfidf
        && tfidf > random
        && havg < hmax
        && within(Duration::from_secs(120), t);
    outcome(
        pass,
        format!(
            "F sumpool {sum:.3} (a={a_sum:.1}), hmax {hmax:.3} (a={a_max:.1}), tfidf {tfidf:.3} (a={a_tfidf:.1}), \
             random {random:.3}, havg {havg:.3} (a={a_avg:.1}); {} tokens, {t:.1?}",
            setup.corpus.token_count()
        ),
    )
}

fn criterion_7() -> Outcome {
    let config = SynthConfig {
        placement: SynonymPlacement::AcrossTurns,
        ..SynthConfig::default()
    };
    let (mut virt, mut within_s) = (Vec::new(), Vec::new());
    for seed in 1..=5 {
        let setup = synthetic_setup(config.clone(), 70 + seed);
        for (strategy, out) in [
            (Strategy::VirtualSentence, &mut virt),
            (Strategy::WithinSentence, &mut within_s),
        ] {
            let model = sessiontiling::parallel::train(&setup.corpus, train_config(strategy, seed))
                .unwrap();
            let vectors = model.word_vectors();
            out.push(
                tuned_f1(
                    &setup,
                    &SimilarityScorer::embedding(ScorerKind::HeuristicMax, &vectors),
                )
                .1,
            );
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mv, mw) = (mean(&virt), mean(&within_s));
    outcome(
        mv >= mw,
        format!("mean heuristic-max F virtual {mv:.3} vs within {mw:.3} over 5 seeds ({virt:.3?} / {within_s:.3?})"),
    )
}

/// Each word's vector is the indicator of its topic.
fn topic_indicator_vectors(config: &SynthConfig) -> WordVectors {
    let mut words = Vec::new();
    let mut data = Vec::new();
    for t in 0..config.topics {
        for k in 0..config.core_words {
            for w in [
                sessiontiling::synth::core_word(t, k),
                sessiontiling::synth::synonym(t, k),
            ] {
                words.push(w);
                data.extend((0..config.topics).map(|i| f64::from(u8::from(i == t))));
            }
        }
    }
    WordVectors::new(words, config.topics, data).unwrap()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let vectors = random_vectors(30, 16, &mut rng);
    let mut mismatches = 0;
    let mut gaps = 0;
    for k in 0..50 {
        let session = random_session(30, &mut rng);
        let kind = [
            ScorerKind::SumPool,
            ScorerKind::HeuristicMax,
            ScorerKind::HeuristicAvg,
        ][k % 3];
        let scorer = SimilarityScorer::embedding(kind, &vectors);
        let offline = segment(&session, &scorer, &SegmenterConfig::offline(0.5)).unwrap();
        let mut online = OnlineSegmenter::new(scorer, SegmenterConfig::online(0.5)).unwrap();
        for u in session.utterances() {
            online.push_utterance(u);
        }
        let sims = &offline.profile.sims;
        for (i, &d) in online.depths().iter().enumerate() {
            gaps += 1;
            let left = left_depth(sims, i);
            // the offline depth is this left term plus a non-negative right term
            let offline_holds = depth_offline(sims, i) >= left;
            if d.to_bits() != left.to_bits()
                || online.similarities()[i].to_bits() != sims[i].to_bits()
                || !offline_holds
            {
                mismatches += 1;
            }
        }
    }

    let synth = SynthConfig {
        topics_per_session: 2..=2,
        segment_len: 5..=8,
        ..SynthConfig::clean()
    };
    let fixture_vectors = topic_indicator_vectors(&synth);
    let mut wrong_fixtures = 0;
    let mut g = Generator::new(synth, 8);
    for session in g.sessions(20) {
        let scorer = SimilarityScorer::embedding(ScorerKind::SumPool, &fixture_vectors);
        let config = SegmenterConfig {
            min_gaps_online: 3,
            ..SegmenterConfig::online(0.5)
        };
        let mut online = OnlineSegmenter::new(scorer, config).unwrap();
        for u in session.utterances() {
            online.push_utterance(u);
        }
        let found: BTreeSet<usize> = online.boundaries().collect();
        if &found != session.gold_boundaries() || found.len() != 1 {
            wrong_fixtures += 1;
        }
    }
    outcome(
        mismatches == 0 && wrong_fixtures == 0,
        format!(
            "{mismatches} of {gaps} online depths differ from the offline left term; \
             {wrong_fixtures} of 20 single-switch streams missed the switch"
        ),
    )
}

fn criterion_9() -> Outcome {
    let corpus = Generator::new(SynthConfig::default(), 9).pair_corpus(1_000_000);
    let start = Instant::now();
    let config = TrainConfig {
        dim: 100,
        epochs: 1,
        threads: 1,
        ..TrainConfig::default()
    };
    let mut trainer = Trainer::new(&corpus, config).unwrap();
    let stats = trainer.run_epoch();
    let t = start.elapsed();
    outcome(
        within(Duration::from_secs(120), t),
        format!(
            "{} tokens, one epoch at dim 100 in {t:.1?} (mean loss {:.3})",
            corpus.token_count(),
            stats.mean_loss
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("gradient oracle", criterion_1),
        ("normalization", criterion_2),
        ("similarity oracles", criterion_3),
        ("cutoff monotonicity", criterion_4),
        ("scale invariance", criterion_5),
        ("synthetic scorer ordering", criterion_6),
        ("virtual vs within sentence", criterion_7),
        ("online/offline consistency", criterion_8),
        ("training throughput", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("{} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {label}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
