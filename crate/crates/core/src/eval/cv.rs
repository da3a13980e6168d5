use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, ConfusionMatrix, Metrics};
use super::protocol::{select_articles, TrainParams};
use crate::corpus::{make_folds, Article, Partition, SplitSpec};
use crate::error::{Error, Result};
use crate::features::{CsrMatrix, FittedPipeline};
use crate::hashing::derive_seed;
use crate::linear::{predict, train_ovr, LinearModel, SolverConfig};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub train_metrics: Metrics,
    pub test_metrics: Metrics,
    pub confusion_matrix: ConfusionMatrix,
}

/// Per-fold results and the F1 aggregates (positive-class F1 for binary label
/// fields, macro F1 otherwise). `test_score_std` is the sample standard deviation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub folds: Vec<FoldResult>,
    pub train_score_mean: f64,
    pub test_score_mean: f64,
    pub test_score_std: f64,
}

pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl CvResult {
    pub(crate) fn from_folds(folds: Vec<FoldResult>) -> Self {
        let test: Vec<f64> = folds.iter().map(|f| f.test_metrics.f1).collect();
        let train: Vec<f64> = folds.iter().map(|f| f.train_metrics.f1).collect();
        let (test_score_mean, test_score_std) = mean_std(&test);
        CvResult {
            folds,
            train_score_mean: mean_std(&train).0,
            test_score_mean,
            test_score_std,
        }
    }
}

/// Features of one fold, fitted on its training side.
pub(crate) struct PreparedFold<F> {
    train_x: CsrMatrix<F>,
    train_labels: Vec<String>,
    test_x: CsrMatrix<F>,
    test_labels: Vec<String>,
}

impl<F: Scalar> PreparedFold<F> {
    pub(crate) fn new(
        corpus: &[Article],
        partition: &Partition,
        params: &TrainParams,
    ) -> Result<Self> {
        let field = params.label_field;
        let train = select_articles(corpus, &partition.train_ids)?;
        let test = select_articles(corpus, &partition.test_ids)?;
        let labels = |arts: &[&Article]| {
            arts.iter()
                .map(|a| a.label_or_err(field))
                .collect::<Result<Vec<_>>>()
        };
        let (pipeline, train_x) = FittedPipeline::<F>::fit(&train, &params.pipeline)?;
        Ok(PreparedFold {
            train_x,
            train_labels: labels(&train)?,
            test_x: pipeline.transform(&test)?,
            test_labels: labels(&test)?,
        })
    }

    /// Trains with `solver` and scores both sides.
    pub(crate) fn run(
        &self,
        fold: usize,
        params: &TrainParams,
        solver: &SolverConfig,
    ) -> Result<FoldResult> {
        let model = train_ovr(&self.train_x, &self.train_labels, solver, params.kind)?;
        let positive = params.label_field.positive_class();
        let train_cm = confusion(&model, &self.train_x, &self.train_labels)?;
        let test_cm = confusion(&model, &self.test_x, &self.test_labels)?;
        Ok(FoldResult {
            fold,
            train_size: self.train_labels.len(),
            test_size: self.test_labels.len(),
            train_metrics: compute_metrics(&train_cm, positive)?,
            test_metrics: compute_metrics(&test_cm, positive)?,
            confusion_matrix: test_cm,
        })
    }
}

fn confusion<F: Scalar>(
    model: &LinearModel<F>,
    x: &CsrMatrix<F>,
    truth: &[String],
) -> Result<ConfusionMatrix> {
    let classes: BTreeSet<&str> = model
        .classes
        .iter()
        .chain(truth)
        .map(String::as_str)
        .collect();
    let classes: Vec<String> = classes.into_iter().map(str::to_string).collect();
    let pos = |c: &str| classes.iter().position(|k| k == c).unwrap();
    let predicted: Vec<usize> = predict(model, x)?
        .into_iter()
        .map(|k| pos(&model.classes[k]))
        .collect();
    let truth: Vec<usize> = truth.iter().map(|t| pos(t)).collect();
    Ok(ConfusionMatrix::from_predictions(
        classes, &truth, &predicted,
    ))
}

/// Solver settings for fold `fold` at grid position `grid`.
pub(crate) fn fold_solver(
    params: &TrainParams,
    seed: u64,
    fold: usize,
    grid: usize,
) -> SolverConfig {
    SolverConfig {
        seed: derive_seed(seed, "cv", &[fold as u64, grid as u64]),
        ..params.solver.clone()
    }
}

pub(crate) fn check_class_sizes(
    corpus: &[Article],
    params: &TrainParams,
    folds: usize,
) -> Result<()> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for a in corpus {
        *counts
            .entry(a.label_or_err(params.label_field)?)
            .or_insert(0) += 1;
    }
    if counts.len() < 2 {
        return Err(Error::SingleClass);
    }
    match counts.into_iter().find(|(_, n)| *n < folds) {
        Some((class, count)) => Err(Error::ClassTooSmall {
            class,
            count,
            needed: folds,
        }),
        None => Ok(()),
    }
}

pub(crate) fn cv_partitions(
    corpus: &[Article],
    params: &TrainParams,
    folds: usize,
    seed: u64,
) -> Result<Vec<Partition>> {
    check_class_sizes(corpus, params, folds)?;
    make_folds(corpus, &SplitSpec::kfold(folds, seed, params.label_field))
}

/// Stratified k-fold cross validation. Vocabulary and idf weights are refitted
/// on every fold's training side; folds run concurrently.
pub fn cross_validate<F: Scalar>(
    corpus: &[Article],
    params: &TrainParams,
    folds: usize,
    seed: u64,
) -> Result<CvResult> {
    let partitions = cv_partitions(corpus, params, folds, seed)?;
    cross_validate_partitions::<F>(corpus, &partitions, params, seed)
}

/// Cross validation over caller-supplied folds.
pub fn cross_validate_partitions<F: Scalar>(
    corpus: &[Article],
    partitions: &[Partition],
    params: &TrainParams,
    seed: u64,
) -> Result<CvResult> {
    let folds = partitions
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            PreparedFold::<F>::new(corpus, p, params)?.run(
                i,
                params,
                &fold_solver(params, seed, i, 0),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CvResult::from_folds(folds))
}
