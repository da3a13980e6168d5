mod common;

use std::fs;

use common::{newsclf, ok, synthetic, write_articles};
use serde_json::Value;

fn corpus_dir(n_docs: usize) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write_articles(&dir.path().join("corpus.jsonl"), &synthetic(n_docs));
    dir
}

#[test]
fn ingest_counts_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let mut articles = synthetic(10);
    articles[3].body = "tiny".into();
    articles[7].body = "also too short".into();
    articles[0].date = "03.04.2017".into();
    write_articles(&dir.path().join("raw.jsonl"), &articles);

    let run = ok(
        dir.path(),
        &["ingest", "--input", "raw.jsonl", "--output", "clean.jsonl"],
    );
    assert!(run.stdout.contains("kept: 8\n"));
    assert!(run.stdout.contains("dropped_short: 2\n"));
    assert_eq!(
        run.out(),
        dir.path()
            .join("clean.jsonl")
            .strip_prefix(dir.path())
            .unwrap()
    );
    let first = fs::read(dir.path().join("clean.jsonl")).unwrap();
    assert_eq!(first.iter().filter(|&&b| b == b'\n').count(), 8);
    assert!(String::from_utf8_lossy(&first).contains("2017-04-03"));

    ok(
        dir.path(),
        &[
            "ingest",
            "--input",
            "clean.jsonl",
            "--output",
            "again.jsonl",
        ],
    );
    assert_eq!(fs::read(dir.path().join("again.jsonl")).unwrap(), first);
}

#[test]
fn ingest_reports_the_line_of_a_bad_date() {
    let dir = tempfile::tempdir().unwrap();
    let mut articles = synthetic(5);
    articles[2].date = "31.31.2017".into();
    write_articles(&dir.path().join("raw.jsonl"), &articles);
    let run = newsclf(
        dir.path(),
        &["ingest", "--input", "raw.jsonl", "--output", "c.jsonl"],
        &[],
    );
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("line 3"), "{}", run.stderr);
    assert!(!dir.path().join("c.jsonl").exists());
}

#[test]
fn usage_errors_exit_with_two_before_reading_anything() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[
            "split",
            "--corpus",
            "missing.jsonl",
            "--output",
            "s.json",
            "--folds",
            "3",
        ][..],
        &[
            "split",
            "--corpus",
            "missing.jsonl",
            "--output",
            "s.json",
            "--kind",
            "holdout",
        ],
        &[
            "train",
            "--corpus",
            "missing.jsonl",
            "--output",
            "m",
            "--c",
            "-1",
        ],
        &[
            "train",
            "--corpus",
            "missing.jsonl",
            "--output",
            "m",
            "--report",
            "r.json",
        ],
        &[
            "train",
            "--corpus",
            "missing.jsonl",
            "--output",
            "m",
            "--ngram-min",
            "3",
        ],
        &[
            "eval",
            "--corpus",
            "missing.jsonl",
            "--output",
            "r",
            "--protocol",
            "publisher_holdout",
        ],
        &[
            "eval",
            "--corpus",
            "missing.jsonl",
            "--output",
            "r",
            "--protocol",
            "nope",
        ],
        &[
            "eval",
            "--corpus",
            "missing.jsonl",
            "--output",
            "r",
            "--bundle",
            "b",
            "--split",
            "s",
            "--protocol",
            "satire_random",
        ],
        &[
            "curve",
            "--corpus",
            "missing.jsonl",
            "--output",
            "c",
            "--kind",
            "learning",
        ],
        &[
            "gridsearch",
            "--corpus",
            "missing.jsonl",
            "--output",
            "g",
            "--c-grid",
            "1,0",
        ],
        &["frobnicate"],
    ] {
        let run = newsclf(dir.path(), args, &[]);
        assert_eq!(run.code, 2, "{args:?}: {}", run.stderr);
    }
    let run = newsclf(
        dir.path(),
        &["train", "--corpus", "missing.jsonl", "--output", "m"],
        &[],
    );
    assert_eq!(run.code, 1);
    assert_eq!(newsclf(dir.path(), &["--help"], &[]).code, 0);
}

#[test]
fn eval_reproduces_the_train_time_report() {
    let dir = corpus_dir(400);
    let p = dir.path();
    ok(
        p,
        &[
            "split",
            "--corpus",
            "corpus.jsonl",
            "--output",
            "split.json",
        ],
    );
    let train = ok(
        p,
        &[
            "train",
            "--corpus",
            "corpus.jsonl",
            "--split",
            "split.json",
            "--task",
            "satire",
            "--model",
            "svm",
            "--c",
            "100",
            "--output",
            "model.bundle",
            "--report",
            "train.json",
        ],
    );
    assert_eq!(train.out().to_str(), Some("train.json"));
    ok(
        p,
        &[
            "eval",
            "--corpus",
            "corpus.jsonl",
            "--bundle",
            "model.bundle",
            "--split",
            "split.json",
            "--output",
            "eval.json",
        ],
    );
    assert_eq!(
        fs::read(p.join("train.json")).unwrap(),
        fs::read(p.join("eval.json")).unwrap()
    );
    let report: Value = serde_json::from_slice(&fs::read(p.join("eval.json")).unwrap()).unwrap();
    assert_eq!(report["test_size"], 80);
    assert!(report["duration_seconds"].is_null());
}

#[test]
fn predict_scores_out_of_vocabulary_text_with_the_bias() {
    let dir = corpus_dir(300);
    let p = dir.path();
    ok(
        p,
        &[
            "train",
            "--corpus",
            "corpus.jsonl",
            "--output",
            "model.bundle",
        ],
    );
    fs::write(
        p.join("in.jsonl"),
        "{\"id\": \"x1\", \"body\": \"qqqq zzzz\"}\n{\"title\": \"no id\"}\n",
    )
    .unwrap();
    ok(
        p,
        &[
            "predict",
            "--bundle",
            "model.bundle",
            "--input",
            "in.jsonl",
            "--output",
            "pred.jsonl",
        ],
    );
    let bundle: newsclf::ModelBundle =
        newsclf::persist::load_bundle(p.join("model.bundle")).unwrap();
    let lines: Vec<Value> = fs::read_to_string(p.join("pred.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["id"], "x1");
    assert_eq!(lines[1]["id"], "2");
    let bias = bundle.model.bias[0];
    assert_eq!(lines[0]["score"].as_f64(), Some(bias));
    let expected = if bias > 0.0 { "satire" } else { "regular" };
    assert_eq!(lines[0]["label"], expected);
}

#[test]
fn validation_curve_has_a_row_per_grid_value() {
    let dir = corpus_dir(300);
    let p = dir.path();
    ok(
        p,
        &[
            "curve",
            "--corpus",
            "corpus.jsonl",
            "--kind",
            "validation",
            "--folds",
            "3",
            "--c-grid",
            "0.01,0.1,1,10,100,1000,10000",
            "--output",
            "vc.csv",
        ],
    );
    let csv = fs::read_to_string(p.join("vc.csv")).unwrap();
    assert_eq!(csv.lines().count(), 8);
    assert!(csv.starts_with("x,train_score_mean,cv_score_mean,cv_score_std\n0.01,"));

    ok(
        p,
        &[
            "curve",
            "--corpus",
            "corpus.jsonl",
            "--kind",
            "learning",
            "--folds",
            "3",
            "--sizes",
            "150,300",
            "--output",
            "lc.csv",
        ],
    );
    assert_eq!(
        fs::read_to_string(p.join("lc.csv"))
            .unwrap()
            .lines()
            .count(),
        3
    );
}

#[test]
fn gridsearch_picks_a_grid_value() {
    let dir = corpus_dir(300);
    let p = dir.path();
    let run = ok(
        p,
        &[
            "gridsearch",
            "--corpus",
            "corpus.jsonl",
            "--folds",
            "3",
            "--c-grid",
            "0.01,100",
            "--output",
            "g.json",
        ],
    );
    assert!(run.stdout.contains("best_c: 100\n"), "{}", run.stdout);
    let g: Value = serde_json::from_slice(&fs::read(p.join("g.json")).unwrap()).unwrap();
    assert_eq!(g["points"].as_array().unwrap().len(), 2);
}

#[test]
fn protocols_and_stats_run() {
    let dir = corpus_dir(400);
    let p = dir.path();
    let run = ok(
        p,
        &[
            "eval",
            "--corpus",
            "corpus.jsonl",
            "--protocol",
            "publisher_multiclass",
            "--output",
            "pm.json",
        ],
    );
    assert!(run.stdout.contains("protocol: publisher_multiclass"));
    let run = ok(
        p,
        &[
            "eval",
            "--corpus",
            "corpus.jsonl",
            "--protocol",
            "publisher_holdout",
            "--holdout-publishers",
            "publisher00,publisher01",
            "--output",
            "ph.json",
        ],
    );
    assert!(run.stdout.contains("test_size: 200"), "{}", run.stdout);
    let run = ok(
        p,
        &[
            "stats",
            "--corpus",
            "corpus.jsonl",
            "--output",
            "stats.json",
        ],
    );
    assert!(run.stdout.contains("total: 400"));
    let stats: Value = serde_json::from_slice(&fs::read(p.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["per_publisher"]["publisher03"], 100);
}

#[test]
fn flags_beat_config_file_beats_environment() {
    let dir = corpus_dir(100);
    let p = dir.path();
    let split = |name: &str, extra: &[&str], env: &[(&str, &str)]| {
        let mut args = vec!["split", "--corpus", "corpus.jsonl", "--output", name];
        args.extend_from_slice(extra);
        let run = newsclf(p, &args, env);
        assert_eq!(run.code, 0, "{}", run.stderr);
        let parts: Value = serde_json::from_slice(&fs::read(p.join(name)).unwrap()).unwrap();
        parts[0]["spec"]["seed"].as_u64().unwrap()
    };
    fs::write(
        p.join("run.conf"),
        "# shared settings\nseed = 5\nmin_df = 3\n",
    )
    .unwrap();
    assert_eq!(split("a.json", &[], &[]), 42);
    assert_eq!(split("b.json", &[], &[("NEWSCLF_SEED", "7")]), 7);
    assert_eq!(
        split(
            "c.json",
            &["--config", "run.conf"],
            &[("NEWSCLF_SEED", "7")]
        ),
        5
    );
    assert_eq!(
        split(
            "d.json",
            &["--config", "run.conf", "--seed", "9"],
            &[("NEWSCLF_SEED", "7")]
        ),
        9
    );

    fs::write(p.join("bad.conf"), "no_such_option = 1\n").unwrap();
    let run = newsclf(
        p,
        &[
            "--config",
            "bad.conf",
            "split",
            "--corpus",
            "corpus.jsonl",
            "--output",
            "e.json",
        ],
        &[],
    );
    assert_eq!(run.code, 2);
}
