use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{cross_validate, cv_partitions, fold_solver, mean_std, CvResult, PreparedFold};
use super::protocol::{select_articles, TrainParams};
use crate::corpus::{make_partition, Article, SplitSpec};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::hashing::derive_seed;
use crate::scalar::Scalar;

pub const DEFAULT_C_GRID: [f64; 7] = [0.01, 0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0];

/// One curve sample: `x` is a training-set size or a C value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub train_score: f64,
    pub cv_score: f64,
    pub cv_std: f64,
}

impl CurvePoint {
    fn from_cv(x: f64, cv: &CvResult) -> Self {
        CurvePoint {
            x,
            train_score: cv.train_score_mean,
            cv_score: cv.test_score_mean,
            cv_std: cv.test_score_std,
        }
    }
}

/// Cross-validated F1 on stratified subsamples of increasing size. A size equal
/// to the corpus size uses the whole corpus, so that point equals
/// [`cross_validate`] with the same seed.
pub fn learning_curve<F: Scalar>(
    corpus: &[Article],
    sizes: &[usize],
    params: &TrainParams,
    folds: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "learning-curve sizes must be nonempty and increasing".into(),
        ));
    }
    if *sizes.last().unwrap() > corpus.len() {
        return Err(Error::Config(format!(
            "size {} exceeds corpus size {}",
            sizes.last().unwrap(),
            corpus.len()
        )));
    }
    let mut classes = BTreeMap::new();
    for a in corpus {
        *classes
            .entry(a.label_or_err(params.label_field)?)
            .or_insert(0usize) += 1;
    }
    let min_size = folds * classes.len();
    if sizes[0] < min_size {
        return Err(Error::Config(format!(
            "size {} is below folds × classes = {min_size}",
            sizes[0]
        )));
    }
    sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let cv = if s == corpus.len() {
                cross_validate::<F>(corpus, params, folds, seed)?
            } else {
                let spec = SplitSpec::stratified(
                    Fraction::new(s as u64, corpus.len() as u64)?,
                    derive_seed(seed, "learning_curve", &[i as u64]),
                    params.label_field,
                );
                let sample = make_partition(corpus, &spec)?;
                let subset: Vec<Article> = select_articles(corpus, &sample.test_ids)?
                    .into_iter()
                    .cloned()
                    .collect();
                cross_validate::<F>(&subset, params, folds, seed)?
            };
            Ok(CurvePoint::from_cv(s as f64, &cv))
        })
        .collect()
}

/// Cross-validated F1 per C value. The folds and their fitted features are shared
/// across the grid.
pub fn validation_curve<F: Scalar>(
    corpus: &[Article],
    c_grid: &[f64],
    params: &TrainParams,
    folds: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if c_grid.is_empty() || c_grid.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::Config("C grid must be nonempty and positive".into()));
    }
    let partitions = cv_partitions(corpus, params, folds, seed)?;
    let prepared = partitions
        .par_iter()
        .map(|p| PreparedFold::<F>::new(corpus, p, params))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize)> = (0..c_grid.len())
        .flat_map(|g| (0..prepared.len()).map(move |f| (g, f)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(g, f)| {
            let mut solver = fold_solver(params, seed, f, g);
            solver.c = c_grid[g];
            prepared[f].run(f, params, &solver)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(c_grid
        .iter()
        .enumerate()
        .map(|(g, &c)| {
            let folds = &results[g * prepared.len()..(g + 1) * prepared.len()];
            let test: Vec<f64> = folds.iter().map(|r| r.test_metrics.f1).collect();
            let train: Vec<f64> = folds.iter().map(|r| r.train_metrics.f1).collect();
            let (cv_score, cv_std) = mean_std(&test);
            CurvePoint {
                x: c,
                train_score: mean_std(&train).0,
                cv_score,
                cv_std,
            }
        })
        .collect())
}

pub fn write_curve_csv<W: Write>(mut w: W, points: &[CurvePoint]) -> io::Result<()> {
    writeln!(w, "x,train_score_mean,cv_score_mean,cv_score_std")?;
    for p in points {
        writeln!(w, "{},{},{},{}", p.x, p.train_score, p.cv_score, p.cv_std)?;
    }
    w.flush()
}
