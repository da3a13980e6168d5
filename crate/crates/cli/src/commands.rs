use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use newsclf::corpus::{
    clean_corpus, corpus_stats, load_corpus, load_patterns, partitions, write_corpus, Article,
    CleaningConfig, LabelField, Partition, SplitSpec,
};
use newsclf::eval::{
    fit_bundle, learning_curve, run_protocol, select_articles, validation_curve, write_curve_csv,
    EvalReport, Metrics, Protocol, ProtocolParams, TrainParams, DEFAULT_C_GRID,
};
use newsclf::features::PipelineParams;
use newsclf::hashing::derive_seed;
use newsclf::persist::{load_bundle, save_bundle};
use newsclf::{Fraction, ModelBundle};
use serde_json::{json, Value};

use crate::options::{labelled, ModelArgs, PipelineArgs};
use crate::{Cli, Command, CurveKind, SplitKindArg, UsageError};

pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let seed = cli.seed;
    match &cli.command {
        Command::Ingest {
            input,
            output,
            min_chars,
            max_chars,
            strip_patterns,
            date_format,
        } => {
            let mut cfg = CleaningConfig {
                min_body_chars: *min_chars,
                max_body_chars: *max_chars,
                ..CleaningConfig::default()
            };
            if let Some(path) = strip_patterns {
                cfg.strip_patterns = load_patterns(path).map_err(UsageError::from)?;
            }
            if !date_format.is_empty() {
                cfg.date_formats = date_format.clone();
            }
            cfg.validate().map_err(UsageError::from)?;
            ingest(input, output, &cfg)
        }
        Command::Stats { corpus, output } => stats(corpus, output.as_deref()),
        Command::Split {
            corpus,
            output,
            kind,
            test_fraction,
            holdout_publishers,
            folds,
            task,
        } => {
            let spec = split_spec(
                *kind,
                *test_fraction,
                holdout_publishers,
                *folds,
                seed,
                task.task,
            )?;
            split(corpus, output, &spec)
        }
        Command::Train {
            corpus,
            split,
            fold,
            output,
            report,
            record_timing,
            task,
            model,
            pipeline,
        } => {
            let params = train_params(model, pipeline, task.task, seed)?;
            train(
                corpus,
                split.as_deref(),
                *fold,
                output,
                report.as_deref(),
                *record_timing,
                &params,
            )
        }
        Command::Eval {
            corpus,
            output,
            bundle,
            split,
            fold,
            protocol,
            test_fraction,
            holdout_publishers,
            record_timing,
            task,
            model,
            pipeline,
        } => match (bundle, split, protocol) {
            (Some(bundle), Some(split), None) => eval_bundle(
                corpus,
                bundle,
                split,
                *fold,
                task.task,
                output,
                *record_timing,
            ),
            (None, None, Some(protocol)) => {
                if *protocol == Protocol::PublisherHoldout && holdout_publishers.is_empty() {
                    return Err(
                        UsageError("publisher_holdout needs --holdout-publishers".into()).into(),
                    );
                }
                if test_fraction.is_zero() || !test_fraction.is_proper() {
                    return Err(UsageError("--test-fraction must lie in (0, 1)".into()).into());
                }
                let (kind, solver) = model.resolve(seed)?;
                let params = ProtocolParams {
                    pipeline: pipeline.resolve()?,
                    kind,
                    solver,
                    test_fraction: *test_fraction,
                    holdout_publishers: holdout_publishers.clone(),
                    seed,
                    record_timing: *record_timing,
                };
                eval_protocol(corpus, *protocol, &params, output)
            }
            _ => Err(UsageError(
                "use either --bundle with --split, or --protocol".into(),
            ))?,
        },
        Command::Curve {
            corpus,
            output,
            kind,
            folds,
            sizes,
            c_grid,
            task,
            model,
            pipeline,
        } => {
            let params = train_params(model, pipeline, task.task, seed)?;
            check_folds(*folds)?;
            match kind {
                CurveKind::Learning => {
                    if sizes.is_empty() || !c_grid.is_empty() {
                        return Err(UsageError(
                            "a learning curve takes --sizes and no --c-grid".into(),
                        )
                        .into());
                    }
                }
                CurveKind::Validation => {
                    if !sizes.is_empty() {
                        return Err(UsageError("a validation curve takes no --sizes".into()).into());
                    }
                    check_grid(c_grid)?;
                }
            }
            curve(
                corpus,
                output,
                *kind,
                *folds,
                sizes,
                &grid_or_default(c_grid),
                &params,
                seed,
            )
        }
        Command::Gridsearch {
            corpus,
            output,
            folds,
            c_grid,
            task,
            model,
            pipeline,
        } => {
            let params = train_params(model, pipeline, task.task, seed)?;
            check_folds(*folds)?;
            check_grid(c_grid)?;
            gridsearch(
                corpus,
                output,
                *folds,
                &grid_or_default(c_grid),
                &params,
                seed,
            )
        }
        Command::Predict {
            bundle,
            input,
            output,
        } => predict(bundle, input, output),
    }
}

fn train_params(
    model: &ModelArgs,
    pipeline: &PipelineArgs,
    field: LabelField,
    seed: u64,
) -> Result<TrainParams, UsageError> {
    let (kind, solver) = model.resolve(derive_seed(seed, "solver", &[]))?;
    Ok(TrainParams {
        pipeline: pipeline.resolve()?,
        kind,
        solver,
        label_field: field,
    })
}

fn check_folds(folds: usize) -> Result<(), UsageError> {
    if folds < 2 {
        return Err(UsageError(format!(
            "--folds must be at least 2, got {folds}"
        )));
    }
    Ok(())
}

fn check_grid(grid: &[f64]) -> Result<(), UsageError> {
    if grid.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
        return Err(UsageError("--c-grid values must be positive".into()));
    }
    Ok(())
}

fn grid_or_default(grid: &[f64]) -> Vec<f64> {
    if grid.is_empty() {
        DEFAULT_C_GRID.to_vec()
    } else {
        grid.to_vec()
    }
}

fn split_spec(
    kind: SplitKindArg,
    test_fraction: Option<Fraction>,
    publishers: &[String],
    folds: Option<usize>,
    seed: u64,
    field: LabelField,
) -> Result<SplitSpec, UsageError> {
    let fraction = test_fraction.unwrap_or(Fraction::new(1, 5).expect("nonzero denominator"));
    let mut spec = match kind {
        SplitKindArg::Random => SplitSpec::random(fraction, seed, field),
        SplitKindArg::Stratified => SplitSpec::stratified(fraction, seed, field),
        SplitKindArg::Holdout => {
            SplitSpec::publisher_holdout(publishers.iter().cloned(), seed, field)
        }
        SplitKindArg::Kfold => SplitSpec::kfold(folds.unwrap_or(10), seed, field),
    };
    // flags that belong to another kind are carried over so validation rejects them
    if kind != SplitKindArg::Kfold && folds.is_some() {
        spec.folds = folds;
    }
    if matches!(kind, SplitKindArg::Holdout | SplitKindArg::Kfold) && test_fraction.is_some() {
        spec.test_fraction = test_fraction;
    }
    if kind != SplitKindArg::Holdout && !publishers.is_empty() {
        spec.holdout_publishers = Some(publishers.iter().cloned().collect());
    }
    spec.validate()?;
    Ok(spec)
}

fn read_corpus(path: &Path) -> Result<Vec<Article>> {
    let loaded = load_corpus(path)?;
    if !loaded.errors.is_empty() {
        let lines: Vec<String> = loaded.errors.iter().map(|e| format!("  {e}")).collect();
        bail!(
            "{} has invalid records:\n{}",
            path.display(),
            lines.join("\n")
        );
    }
    Ok(loaded.articles)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn ingest(input: &Path, output: &Path, cfg: &CleaningConfig) -> Result<Vec<PathBuf>> {
    let loaded = load_corpus(input)?;
    if !loaded.errors.is_empty() {
        let lines: Vec<String> = loaded.errors.iter().map(|e| format!("  {e}")).collect();
        bail!(
            "{} has invalid records:\n{}",
            input.display(),
            lines.join("\n")
        );
    }
    let (kept, summary) = clean_corpus(&loaded, cfg)?;
    let file =
        File::create(output).with_context(|| format!("cannot write {}", output.display()))?;
    write_corpus(BufWriter::new(file), &kept)
        .with_context(|| format!("cannot write {}", output.display()))?;
    println!("input: {}", summary.input);
    println!("kept: {}", summary.kept);
    println!("dropped_short: {}", summary.dropped_short);
    println!("dropped_long: {}", summary.dropped_long);
    Ok(vec![output.to_path_buf()])
}

fn stats(corpus: &Path, output: Option<&Path>) -> Result<Vec<PathBuf>> {
    let articles = read_corpus(corpus)?;
    let stats = corpus_stats(&articles);
    println!("total: {}", stats.total);
    println!("satire: {}", stats.satire);
    println!("regular: {}", stats.regular);
    for (publisher, n) in &stats.per_publisher {
        println!("publisher {publisher}: {n}");
    }
    match output {
        Some(path) => {
            write_json(path, &stats)?;
            Ok(vec![path.to_path_buf()])
        }
        None => Ok(Vec::new()),
    }
}

fn split(corpus: &Path, output: &Path, spec: &SplitSpec) -> Result<Vec<PathBuf>> {
    let articles = labelled(read_corpus(corpus)?, spec.label_field);
    let parts = partitions(&articles, spec)?;
    for (i, p) in parts.iter().enumerate() {
        println!(
            "partition {i}: train {} test {}",
            p.train_ids.len(),
            p.test_ids.len()
        );
    }
    write_json(output, &parts)?;
    Ok(vec![output.to_path_buf()])
}

fn read_partition(path: &Path, fold: usize) -> Result<Partition> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut parts: Vec<Partition> = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a split file", path.display()))?;
    if fold >= parts.len() {
        bail!(
            "{} has {} partition(s); --fold {fold} is out of range",
            path.display(),
            parts.len()
        );
    }
    Ok(parts.swap_remove(fold))
}

fn pipeline_of(bundle: &ModelBundle) -> PipelineParams {
    PipelineParams {
        tokenizer: bundle.pipeline.tokenizer.clone(),
        vocab: bundle.pipeline.vocab.params().clone(),
    }
}

fn print_metrics(m: &Metrics) {
    println!("accuracy: {:.6}", m.accuracy);
    println!("precision: {:.6}", m.precision);
    println!("recall: {:.6}", m.recall);
    println!("f1: {:.6}", m.f1);
}

fn split_report(
    corpus: &[Article],
    mut partition: Partition,
    bundle: &ModelBundle,
    field: LabelField,
) -> Result<EvalReport> {
    partition.spec.label_field = field;
    let report = EvalReport::from_bundle("split", corpus, &partition, bundle, pipeline_of(bundle))?;
    print_metrics(&report.metrics);
    Ok(report)
}

fn train(
    corpus: &Path,
    split: Option<&Path>,
    fold: usize,
    output: &Path,
    report: Option<&Path>,
    record_timing: bool,
    params: &TrainParams,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let articles = labelled(read_corpus(corpus)?, params.label_field);
    let partition = split.map(|p| read_partition(p, fold)).transpose()?;
    let train = match &partition {
        Some(p) => select_articles(&articles, &p.train_ids)?,
        None => articles.iter().collect(),
    };
    let bundle: ModelBundle = fit_bundle(&train, params)?;
    println!("model: {}", bundle.model.kind);
    println!("train_size: {}", train.len());
    println!("features: {}", bundle.model.n_features());
    println!("converged: {}", bundle.model.converged);
    save_bundle(&bundle, output)?;
    let mut outputs = vec![output.to_path_buf()];
    if let (Some(path), Some(partition)) = (report, partition) {
        let mut r = split_report(&articles, partition, &bundle, params.label_field)?;
        if record_timing {
            r.duration_seconds = Some(started.elapsed().as_secs_f64());
        }
        write_file(path, r.to_json()?.as_bytes())?;
        outputs.push(path.to_path_buf());
    }
    Ok(outputs)
}

fn eval_bundle(
    corpus: &Path,
    bundle: &Path,
    split: &Path,
    fold: usize,
    field: LabelField,
    output: &Path,
    record_timing: bool,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let bundle: ModelBundle = load_bundle(bundle)?;
    let partition = read_partition(split, fold)?;
    let articles = labelled(read_corpus(corpus)?, field);
    let mut report = split_report(&articles, partition, &bundle, field)?;
    if record_timing {
        report.duration_seconds = Some(started.elapsed().as_secs_f64());
    }
    write_file(output, report.to_json()?.as_bytes())?;
    Ok(vec![output.to_path_buf()])
}

fn eval_protocol(
    corpus: &Path,
    protocol: Protocol,
    params: &ProtocolParams,
    output: &Path,
) -> Result<Vec<PathBuf>> {
    let articles = read_corpus(corpus)?;
    let report = run_protocol::<f64>(&articles, protocol, params)?;
    println!("protocol: {protocol}");
    println!("train_size: {}", report.train_size);
    println!("test_size: {}", report.test_size);
    print_metrics(&report.metrics);
    write_file(output, report.to_json()?.as_bytes())?;
    Ok(vec![output.to_path_buf()])
}

#[allow(clippy::too_many_arguments)]
fn curve(
    corpus: &Path,
    output: &Path,
    kind: CurveKind,
    folds: usize,
    sizes: &[usize],
    grid: &[f64],
    params: &TrainParams,
    seed: u64,
) -> Result<Vec<PathBuf>> {
    let articles = labelled(read_corpus(corpus)?, params.label_field);
    let points = match kind {
        CurveKind::Learning => learning_curve::<f64>(&articles, sizes, params, folds, seed)?,
        CurveKind::Validation => validation_curve::<f64>(&articles, grid, params, folds, seed)?,
    };
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &points)?;
    write_file(output, &buf)?;
    println!("points: {}", points.len());
    Ok(vec![output.to_path_buf()])
}

fn gridsearch(
    corpus: &Path,
    output: &Path,
    folds: usize,
    grid: &[f64],
    params: &TrainParams,
    seed: u64,
) -> Result<Vec<PathBuf>> {
    let articles = labelled(read_corpus(corpus)?, params.label_field);
    let points = validation_curve::<f64>(&articles, grid, params, folds, seed)?;
    // first maximum: the smallest C among equally good values
    let best = points.iter().fold(&points[0], |best, p| {
        if p.cv_score > best.cv_score {
            p
        } else {
            best
        }
    });
    println!("best_c: {}", best.x);
    println!("best_cv_score: {:.6}", best.cv_score);
    write_json(
        output,
        &json!({
            "task": params.label_field,
            "model": params.kind.to_string(),
            "folds": folds,
            "points": points,
            "best_c": best.x,
            "best_cv_score": best.cv_score,
        }),
    )?;
    Ok(vec![output.to_path_buf()])
}

/// Reads prediction input leniently: every field except the text is optional.
fn read_unlabelled(path: &Path) -> Result<Vec<Article>> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("cannot read {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .with_context(|| format!("{}: line {}: invalid JSON", path.display(), i + 1))?;
        let text = |key: &str| {
            value
                .get(key)
                .and_then(Value::as_str)
                .unwrap_or("")
                .to_string()
        };
        let id = match value.get("id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => (i + 1).to_string(),
        };
        out.push(Article {
            id,
            url: text("url"),
            title: text("title"),
            body: text("body"),
            category: text("category"),
            date: text("date"),
            publisher: text("publisher"),
            satire: false,
            paid: None,
        });
    }
    Ok(out)
}

fn predict(bundle: &Path, input: &Path, output: &Path) -> Result<Vec<PathBuf>> {
    let bundle: ModelBundle = load_bundle(bundle)?;
    let articles = read_unlabelled(input)?;
    let scores = bundle.scores(&articles)?;
    let labels = bundle.predict(&articles)?;
    let mut w = BufWriter::new(
        File::create(output).with_context(|| format!("cannot write {}", output.display()))?,
    );
    for ((a, label), row) in articles.iter().zip(&labels).zip(&scores) {
        let score = if row.len() == 1 {
            row[0]
        } else {
            let k = bundle
                .model
                .classes
                .iter()
                .position(|c| c == label)
                .expect("predicted class");
            row[k]
        };
        serde_json::to_writer(
            &mut w,
            &json!({ "id": a.id, "label": label, "score": score }),
        )?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    println!("predicted: {}", articles.len());
    Ok(vec![output.to_path_buf()])
}
