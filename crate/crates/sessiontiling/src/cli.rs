//! The `sessiontiling` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use sessiontiling_core::corpus::Session;
use sessiontiling_core::embeddings::{Strategy, TrainConfig, WordVectors};
use sessiontiling_core::eval::{
    boundary_prf_with_tolerance, prior_probability, random_baseline, tune_alpha, AlphaGrid,
    Boundaries,
};
use sessiontiling_core::similarity::{IdfStats, ScorerKind, SimilarityScorer};
use sessiontiling_core::tiling::{segment, SegmenterConfig};

use crate::formats::{
    load_idf, load_model, load_pair_corpus, load_sessions, save_idf, save_model,
    serialize_sessions, write_profile, write_text,
};
use crate::synth::{Generator, SynonymPlacement, SynthConfig};
use crate::{parallel, report, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sessiontiling",
    version,
    about = "Dialogue session segmentation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train word embeddings on a `query<TAB>reply` corpus.
    Train(TrainArgs),
    /// Segment sessions; writes the session format with `====` boundaries.
    Segment(SegmentArgs),
    /// Compare predicted and gold session files.
    Evaluate(EvaluateArgs),
    /// Choose α whose predicted boundary count best matches the gold count.
    Tune(TuneArgs),
    /// Place boundaries at random with a fixed per-gap probability.
    BaselineRandom(BaselineArgs),
    /// Write document frequencies for the tf·idf scorer.
    Idf(IdfArgs),
    /// Generate a synthetic pair corpus and annotated sessions.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Virtual,
    Within,
    Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScorerArg {
    Tfidf,
    Sumpool,
    Hmax,
    Havg,
}

impl From<ScorerArg> for ScorerKind {
    fn from(s: ScorerArg) -> Self {
        match s {
            ScorerArg::Tfidf => ScorerKind::TfIdf,
            ScorerArg::Sumpool => ScorerKind::SumPool,
            ScorerArg::Hmax => ScorerKind::HeuristicMax,
            ScorerArg::Havg => ScorerKind::HeuristicAvg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Offline,
    Online,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::Virtual)]
    pub strategy: StrategyArg,
    /// Window radius for `--strategy window`.
    #[arg(long, default_value_t = 2)]
    pub tau: usize,
    #[arg(long, default_value_t = 100)]
    pub dim: usize,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    pub lr: f64,
    #[arg(long, default_value_t = 5)]
    pub min_count: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Values above 1 train lock-free and are not bit-reproducible.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct ScorerOpts {
    /// Embedding file; required by every scorer except tfidf.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub sessions: PathBuf,
    #[arg(long, value_enum, default_value_t = ScorerArg::Hmax)]
    pub scorer: ScorerArg,
    /// Document frequencies for tfidf; computed from `--sessions` when absent.
    #[arg(long)]
    pub idf: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Offline)]
    pub mode: ModeArg,
    /// Odd moving-average width; online mode requires 1.
    #[arg(long, default_value_t = 1)]
    pub smooth: usize,
    /// Online depths observed before boundaries may fire.
    #[arg(long, default_value_t = 3)]
    pub min_gaps_online: usize,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[command(flatten)]
    pub scoring: ScorerOpts,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Per-gap TSV of similarity, depth and boundary.
    #[arg(long)]
    pub dump_profile: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    /// A prediction within this many gaps of a gold boundary counts as a hit.
    #[arg(long, default_value_t = 0)]
    pub tolerance: usize,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub scoring: ScorerOpts,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub sessions: PathBuf,
    /// Boundary probability per gap; the gold rate of `--sessions` when absent.
    #[arg(long)]
    pub prior: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IdfArgs {
    /// Each utterance is one document.
    #[arg(long, conflicts_with = "pairs", required_unless_present = "pairs")]
    pub sessions: Option<PathBuf>,
    /// Each query and each reply is one document.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long)]
    pub sessions: PathBuf,
    /// Minimum token count of the pair corpus.
    #[arg(long, default_value_t = 200_000)]
    pub pair_tokens: usize,
    #[arg(long, default_value_t = 100)]
    pub session_count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.3)]
    pub synonym_rate: f64,
    #[arg(long, default_value_t = 12)]
    pub function_words: usize,
    /// Keep synonyms out of queries and keep each reply in one form.
    #[arg(long)]
    pub across_turns: bool,
}

/// Parses `argv` (program name first) and runs it, writing results to `out`
/// and diagnostics to standard error.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => EXIT_USAGE,
        Error::Core(sessiontiling_core::Error::InvalidConfig(_)) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn write_out(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Train(a) => cmd_train(a),
        Command::Segment(a) => cmd_segment(a, out),
        Command::Evaluate(a) => cmd_evaluate(a, out),
        Command::Tune(a) => cmd_tune(a, out),
        Command::BaselineRandom(a) => cmd_baseline(a, out),
        Command::Idf(a) => cmd_idf(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let strategy = match a.strategy {
        StrategyArg::Virtual => Strategy::VirtualSentence,
        StrategyArg::Within => Strategy::WithinSentence,
        StrategyArg::Window => Strategy::Window { tau: a.tau },
    };
    let config = TrainConfig {
        strategy,
        dim: a.dim,
        epochs: a.epochs,
        initial_lr: a.lr,
        min_count: a.min_count,
        seed: a.seed,
        threads: a.threads,
    };
    config.validate()?;
    let corpus = load_pair_corpus(&a.pairs)?;
    info!("{} pairs, {} tokens", corpus.len(), corpus.token_count());
    let model = parallel::train(&corpus, config)?;
    info!("vocabulary {} words", model.vocab().len());
    save_model(&a.out, &model)
}

/// Loaded scoring resources; the scorer borrows from these.
struct Resources {
    sessions: Vec<Session>,
    vectors: Option<WordVectors>,
    idf: Option<IdfStats>,
    kind: ScorerKind,
    config: SegmenterConfig,
}

impl Resources {
    fn load(o: &ScorerOpts, alpha: f64) -> Result<Self> {
        let config = match o.mode {
            ModeArg::Offline => SegmenterConfig {
                smoothing_width: o.smooth,
                min_gaps_online: o.min_gaps_online,
                ..SegmenterConfig::offline(alpha)
            },
            ModeArg::Online => SegmenterConfig {
                smoothing_width: o.smooth,
                min_gaps_online: o.min_gaps_online,
                ..SegmenterConfig::online(alpha)
            },
        };
        config.validate()?;
        let kind = ScorerKind::from(o.scorer);
        if kind.uses_embeddings() && o.model.is_none() {
            return Err(Error::Usage(
                format!("--scorer {:?} needs --model", o.scorer).to_lowercase(),
            ));
        }
        let sessions = load_sessions(&o.sessions)?;
        let vectors = match (&o.model, kind.uses_embeddings()) {
            (Some(p), true) => Some(load_model(p)?),
            _ => None,
        };
        let idf = match (&o.idf, kind) {
            (Some(p), ScorerKind::TfIdf) => Some(load_idf(p)?),
            (None, ScorerKind::TfIdf) => Some(IdfStats::from_sessions(&sessions)),
            _ => None,
        };
        Ok(Resources {
            sessions,
            vectors,
            idf,
            kind,
            config,
        })
    }

    fn scorer(&self) -> SimilarityScorer<'_> {
        match (&self.idf, &self.vectors) {
            (Some(idf), _) => SimilarityScorer::TfIdf(idf),
            (None, Some(v)) => SimilarityScorer::embedding(self.kind, v),
            (None, None) => unreachable!("load always provides the scorer's resource"),
        }
    }
}

fn cmd_segment(a: SegmentArgs, out: &mut dyn Write) -> Result<()> {
    let res = Resources::load(&a.scoring, a.alpha)?;
    let scorer = res.scorer();
    let mut predicted = Vec::with_capacity(res.sessions.len());
    let mut results = Vec::with_capacity(res.sessions.len());
    for session in &res.sessions {
        let r = segment(session, &scorer, &res.config)?;
        predicted.push(session.with_boundaries(r.boundaries.clone())?);
        results.push(r);
    }
    if let Some(p) = &a.dump_profile {
        write_text(p, &write_profile(&results))?;
    }
    write_out(out, a.out.as_deref(), &serialize_sessions(&predicted))
}

fn boundaries(sessions: &[Session]) -> Vec<Boundaries> {
    sessions
        .iter()
        .map(|s| s.gold_boundaries().clone())
        .collect()
}

fn cmd_evaluate(a: EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let pred = load_sessions(&a.pred)?;
    let gold = load_sessions(&a.gold)?;
    for (k, (p, g)) in pred.iter().zip(&gold).enumerate() {
        if p.len() != g.len() {
            return Err(Error::Usage(format!(
                "session {k} has {} utterances in {} but {} in {}",
                p.len(),
                a.pred.display(),
                g.len(),
                a.gold.display()
            )));
        }
    }
    let r = boundary_prf_with_tolerance(&boundaries(&pred), &boundaries(&gold), a.tolerance)?;
    write_out(out, None, &report::render(&r))
}

fn cmd_tune(a: TuneArgs, out: &mut dyn Write) -> Result<()> {
    let res = Resources::load(&a.scoring, 0.0)?;
    let choice = tune_alpha(
        &res.sessions,
        &res.scorer(),
        &res.config,
        &AlphaGrid::default(),
    )?;
    info!(
        "alpha {:.1}: {} predicted vs {} gold",
        choice.alpha, choice.predicted, choice.gold
    );
    write_out(out, None, &format!("{:.1}\n", choice.alpha))
}

fn cmd_baseline(a: BaselineArgs, out: &mut dyn Write) -> Result<()> {
    let sessions = load_sessions(&a.sessions)?;
    let prior = a.prior.unwrap_or_else(|| prior_probability(&sessions));
    let predicted = random_baseline(&sessions, prior, a.seed)?;
    let annotated = sessions
        .iter()
        .zip(predicted)
        .map(|(s, b)| s.with_boundaries(b))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    write_out(out, a.out.as_deref(), &serialize_sessions(&annotated))
}

fn cmd_idf(a: IdfArgs) -> Result<()> {
    let stats = match (&a.sessions, &a.pairs) {
        (Some(s), _) => IdfStats::from_sessions(&load_sessions(s)?),
        (None, Some(p)) => IdfStats::from_pair_corpus(&load_pair_corpus(p)?),
        (None, None) => unreachable!("clap requires one source"),
    };
    save_idf(&a.out, &stats)
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&a.synonym_rate) {
        return Err(Error::Usage("--synonym-rate must lie in [0, 1]".into()));
    }
    let config = SynthConfig {
        synonym_rate: a.synonym_rate,
        function_words: a.function_words,
        function_len: if a.function_words == 0 { 0..=0 } else { 1..=3 },
        placement: if a.across_turns {
            SynonymPlacement::AcrossTurns
        } else {
            SynonymPlacement::Anywhere
        },
        ..SynthConfig::default()
    };
    let mut g = Generator::new(config, a.seed);
    let mut pairs = String::new();
    for (q, r) in g.pair_lines(a.pair_tokens) {
        pairs.push_str(&q);
        pairs.push('\t');
        pairs.push_str(&r);
        pairs.push('\n');
    }
    write_text(&a.pairs, &pairs)?;
    write_text(
        &a.sessions,
        &serialize_sessions(&g.sessions(a.session_count)),
    )
}
