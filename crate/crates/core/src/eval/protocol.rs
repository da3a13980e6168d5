use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, ConfusionMatrix, Metrics};
use crate::corpus::{
    corpus_fingerprint, make_partition, Article, LabelField, Partition, SplitSpec,
};
use crate::error::{Error, Result};
use crate::features::{FittedPipeline, PipelineParams};
use crate::fraction::Fraction;
use crate::hashing::derive_seed;
use crate::linear::{predict, train_ovr, ModelKind, SolverConfig};
use crate::persist::ModelBundle;
use crate::scalar::Scalar;

/// Everything needed to fit pipeline + classifier on a set of articles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainParams {
    pub pipeline: PipelineParams,
    pub kind: ModelKind,
    pub solver: SolverConfig,
    pub label_field: LabelField,
}

impl TrainParams {
    pub fn new(kind: ModelKind, label_field: LabelField) -> Self {
        TrainParams {
            pipeline: PipelineParams::default(),
            kind,
            solver: SolverConfig::for_kind(kind),
            label_field,
        }
    }
}

/// Looks up articles by id, in the order of `ids`.
pub fn select_articles<'a>(corpus: &'a [Article], ids: &[String]) -> Result<Vec<&'a Article>> {
    let index: HashMap<&str, &Article> = corpus.iter().map(|a| (a.id.as_str(), a)).collect();
    ids.iter()
        .map(|id| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownId(id.clone()))
        })
        .collect()
}

/// Fits vocabulary, idf weights and classifier on `train` only.
pub fn fit_bundle<F: Scalar>(train: &[&Article], params: &TrainParams) -> Result<ModelBundle<F>> {
    let labels = train
        .iter()
        .map(|a| a.label_or_err(params.label_field))
        .collect::<Result<Vec<_>>>()?;
    let (pipeline, x) = FittedPipeline::<F>::fit(train, &params.pipeline)?;
    let mut model = train_ovr(&x, &labels, &params.solver, params.kind)?;
    model.vocab_fingerprint = pipeline.vocab.fingerprint();
    Ok(ModelBundle {
        pipeline,
        model,
        corpus_fingerprint: corpus_fingerprint(train.iter().copied()),
    })
}

/// Confusion matrix of the bundle's predictions on `test`. Classes are the union
/// of the model's classes and the test labels, sorted.
pub fn evaluate_bundle<F: Scalar>(
    bundle: &ModelBundle<F>,
    test: &[&Article],
    label_field: LabelField,
) -> Result<ConfusionMatrix> {
    let truth = test
        .iter()
        .map(|a| a.label_or_err(label_field))
        .collect::<Result<Vec<_>>>()?;
    let classes: BTreeSet<&str> = bundle
        .model
        .classes
        .iter()
        .map(String::as_str)
        .chain(truth.iter().map(String::as_str))
        .collect();
    let classes: Vec<String> = classes.into_iter().map(str::to_string).collect();
    let pos = |c: &str| classes.iter().position(|k| k == c).unwrap();
    let x = bundle.pipeline.transform(test)?;
    let predicted: Vec<usize> = predict(&bundle.model, &x)?
        .into_iter()
        .map(|k| pos(&bundle.model.classes[k]))
        .collect();
    let truth: Vec<usize> = truth.iter().map(|t| pos(t)).collect();
    Ok(ConfusionMatrix::from_predictions(
        classes, &truth, &predicted,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// satire vs regular on a random test split
    SatireRandom,
    /// publisher identification on a random test split
    PublisherMulticlass,
    /// satire vs regular, whole publishers held out for testing
    PublisherHoldout,
    /// paid vs editorial, articles with a known paid flag only
    PaidVsEditorial,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [
        Protocol::SatireRandom,
        Protocol::PublisherMulticlass,
        Protocol::PublisherHoldout,
        Protocol::PaidVsEditorial,
    ];

    pub fn label_field(self) -> LabelField {
        match self {
            Protocol::SatireRandom | Protocol::PublisherHoldout => LabelField::Satire,
            Protocol::PublisherMulticlass => LabelField::Publisher,
            Protocol::PaidVsEditorial => LabelField::Paid,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::SatireRandom => "satire_random",
            Protocol::PublisherMulticlass => "publisher_multiclass",
            Protocol::PublisherHoldout => "publisher_holdout",
            Protocol::PaidVsEditorial => "paid_vs_editorial",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown protocol {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub pipeline: PipelineParams,
    pub kind: ModelKind,
    pub solver: SolverConfig,
    pub test_fraction: Fraction,
    pub holdout_publishers: Vec<String>,
    pub seed: u64,
    /// Store wall-clock duration in the report (makes reports run-dependent).
    pub record_timing: bool,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams {
            pipeline: PipelineParams::default(),
            kind: ModelKind::LinearSvm,
            solver: SolverConfig::for_kind(ModelKind::LinearSvm),
            test_fraction: Fraction::new(1, 5).unwrap(),
            holdout_publishers: Vec::new(),
            seed: 42,
            record_timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub model: ModelKind,
    pub solver: SolverConfig,
    pub pipeline: PipelineParams,
}

/// Outcome of one evaluation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: String,
    pub spec: SplitSpec,
    pub config: ReportConfig,
    pub train_size: usize,
    pub test_size: usize,
    pub confusion_matrix: ConfusionMatrix,
    pub metrics: Metrics,
    pub model_converged: bool,
    pub duration_seconds: Option<f64>,
    pub corpus_fingerprint: String,
}

impl EvalReport {
    /// Evaluates `bundle` on the test side of `partition`.
    pub fn from_bundle<F: Scalar>(
        protocol: &str,
        corpus: &[Article],
        partition: &Partition,
        bundle: &ModelBundle<F>,
        pipeline: PipelineParams,
    ) -> Result<Self> {
        let field = partition.spec.label_field;
        let test = select_articles(corpus, &partition.test_ids)?;
        let cm = evaluate_bundle(bundle, &test, field)?;
        let metrics = compute_metrics(&cm, field.positive_class())?;
        Ok(EvalReport {
            protocol: protocol.to_string(),
            spec: partition.spec.clone(),
            config: ReportConfig {
                model: bundle.model.kind,
                solver: bundle.model.config.clone(),
                pipeline,
            },
            train_size: partition.train_ids.len(),
            test_size: partition.test_ids.len(),
            confusion_matrix: cm,
            metrics,
            model_converged: bundle.model.converged,
            duration_seconds: None,
            corpus_fingerprint: corpus_fingerprint(corpus),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Builds the protocol's partition, fits on the training side only, evaluates on
/// the test side. Label and publisher requirements are checked before training.
pub fn run_protocol<F: Scalar>(
    corpus: &[Article],
    protocol: Protocol,
    params: &ProtocolParams,
) -> Result<EvalReport> {
    let started = Instant::now();
    let field = protocol.label_field();
    let seed = derive_seed(params.seed, &protocol.to_string(), &[]);
    let paid_subset: Vec<Article>;
    let corpus = if protocol == Protocol::PaidVsEditorial {
        paid_subset = corpus
            .iter()
            .filter(|a| a.paid.is_some())
            .cloned()
            .collect();
        if paid_subset.is_empty() {
            return Err(Error::Config(
                "paid_vs_editorial needs articles with a paid flag".into(),
            ));
        }
        &paid_subset[..]
    } else {
        corpus
    };
    let spec = match protocol {
        Protocol::PublisherHoldout => {
            if params.holdout_publishers.is_empty() {
                return Err(Error::Config(
                    "publisher_holdout needs at least one holdout publisher".into(),
                ));
            }
            SplitSpec::publisher_holdout(params.holdout_publishers.iter().cloned(), seed, field)
        }
        _ => SplitSpec::random(params.test_fraction, seed, field),
    };
    for a in corpus {
        a.label_or_err(field)?;
    }
    let partition = make_partition(corpus, &spec)?;
    let train_params = TrainParams {
        pipeline: params.pipeline.clone(),
        kind: params.kind,
        solver: SolverConfig {
            seed: derive_seed(seed, "solver", &[]),
            ..params.solver.clone()
        },
        label_field: field,
    };
    let train = select_articles(corpus, &partition.train_ids)?;
    let bundle = fit_bundle::<F>(&train, &train_params)?;
    let mut report = EvalReport::from_bundle(
        &protocol.to_string(),
        corpus,
        &partition,
        &bundle,
        params.pipeline.clone(),
    )?;
    if params.record_timing {
        report.duration_seconds = Some(started.elapsed().as_secs_f64());
    }
    Ok(report)
}
