use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sessiontiling::formats::{load_sessions, parse_sessions};
use sessiontiling::report::ReportJson;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sessiontiling"))
        .args(args)
        .env("SESSIONTILING_LOG", "warn")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn report(stdout: &str) -> ReportJson {
    serde_json::from_str(stdout.lines().last().unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn train_clean(dir: &Path) -> PathBuf {
    let model = dir.join("model.txt");
    ok(&[
        "train",
        "--pairs",
        s(&fixture("clean_pairs.tsv")),
        "--out",
        s(&model),
        "--seed",
        "3",
    ]);
    model
}

#[test]
fn one_utterance_session_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.txt");
    fs::write(&path, "hello there\n").unwrap();
    let out = run(&["segment", "--sessions", s(&path), "--scorer", "tfidf"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
}

#[test]
fn clean_fixture_pipeline_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_clean(dir.path());
    let gold = fixture("clean_sessions.txt");
    let pred = dir.path().join("pred.txt");
    let profile = dir.path().join("profile.tsv");
    ok(&[
        "segment",
        "--model",
        s(&model),
        "--sessions",
        s(&gold),
        "--scorer",
        "sumpool",
        "--out",
        s(&pred),
        "--dump-profile",
        s(&profile),
    ]);
    let r = report(&ok(&["evaluate", "--pred", s(&pred), "--gold", s(&gold)]));
    assert_eq!(r.f1, 1.0);
    assert!(r.gold > 0);

    let gaps: usize = load_sessions(&gold)
        .unwrap()
        .iter()
        .map(|s| s.gap_count())
        .sum();
    let text = fs::read_to_string(&profile).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(rows.len(), gaps);
    let flagged = rows.iter().filter(|l| l.ends_with("\t1")).count();
    assert_eq!(flagged, r.predicted);
}

#[test]
fn segment_writes_the_session_format_to_stdout() {
    let gold = fixture("clean_sessions.txt");
    let stdout = ok(&[
        "segment",
        "--sessions",
        s(&gold),
        "--scorer",
        "tfidf",
        "--mode",
        "online",
    ]);
    let pred = parse_sessions(&stdout).unwrap();
    let gold = load_sessions(&gold).unwrap();
    assert_eq!(pred.len(), gold.len());
    for (p, g) in pred.iter().zip(&gold) {
        assert_eq!(p.len(), g.len());
    }
}

#[test]
fn self_evaluation_is_perfect() {
    let gold = fixture("clean_sessions.txt");
    let stdout = ok(&["evaluate", "--pred", s(&gold), "--gold", s(&gold)]);
    assert!(stdout.contains("f1         1.0000"));
    let r = report(&stdout);
    assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
    assert_eq!(r.tp, r.gold);
}

#[test]
fn identical_flags_give_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    fs::create_dir_all(&a).unwrap();
    fs::create_dir_all(&b).unwrap();
    let (ma, mb) = (train_clean(&a), train_clean(&b));
    assert_eq!(fs::read(&ma).unwrap(), fs::read(&mb).unwrap());
    let gold = fixture("clean_sessions.txt");
    let seg = |m: &Path| {
        ok(&[
            "segment",
            "--model",
            s(m),
            "--sessions",
            s(&gold),
            "--scorer",
            "hmax",
        ])
    };
    assert_eq!(seg(&ma), seg(&mb));
    let base = |seed: &str| ok(&["baseline-random", "--sessions", s(&gold), "--seed", seed]);
    assert_eq!(base("4"), base("4"));
    assert_ne!(base("4"), base("5"));
}

#[test]
fn tune_prints_a_grid_alpha() {
    let gold = fixture("clean_sessions.txt");
    let stdout = ok(&["tune", "--sessions", s(&gold), "--scorer", "tfidf"]);
    let alpha: f64 = stdout.trim().parse().unwrap();
    assert!((-1.0..=2.0).contains(&alpha));
    assert!(((alpha * 10.0).round() - alpha * 10.0).abs() < 1e-9);
}

#[test]
fn idf_file_feeds_the_tfidf_scorer() {
    let dir = tempfile::tempdir().unwrap();
    let idf = dir.path().join("idf.tsv");
    let gold = fixture("clean_sessions.txt");
    ok(&[
        "idf",
        "--pairs",
        s(&fixture("clean_pairs.tsv")),
        "--out",
        s(&idf),
    ]);
    let stdout = ok(&[
        "segment",
        "--sessions",
        s(&gold),
        "--scorer",
        "tfidf",
        "--idf",
        s(&idf),
    ]);
    assert_eq!(parse_sessions(&stdout).unwrap().len(), 10);
}

#[test]
fn usage_errors_exit_one() {
    let gold = fixture("clean_sessions.txt");
    assert_eq!(run(&["train", "--pairs", "x"]).status.code(), Some(1));
    assert_eq!(
        run(&["segment", "--sessions", s(&gold), "--bogus"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["segment", "--sessions", s(&gold), "--scorer", "havg"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "segment",
            "--sessions",
            s(&gold),
            "--smooth",
            "2",
            "--scorer",
            "tfidf"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        run(&["evaluate", "--pred", "missing.txt", "--gold", "missing.txt"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_lists_defaults() {
    let out = run(&["segment", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8(out.stdout).unwrap();
    for d in [
        "[default: hmax]",
        "[default: 0.5]",
        "[default: offline]",
        "[default: 1]",
        "[default: 3]",
    ] {
        assert!(help.contains(d), "{d} missing");
    }
}
