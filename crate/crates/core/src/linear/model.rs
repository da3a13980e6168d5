use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sparse_dot;
use crate::error::{Error, Result};
use crate::features::CsrMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Logreg,
    LinearSvm,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Logreg => "logreg",
            ModelKind::LinearSvm => "linear_svm",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logreg" | "lr" => Ok(ModelKind::Logreg),
            "svm" | "linear_svm" => Ok(ModelKind::LinearSvm),
            _ => Err(Error::Config(format!("unknown model kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Weight of the loss term; larger means weaker regularization.
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub fit_bias: bool,
    /// Seeds the coordinate order of the dual solver.
    pub seed: u64,
}

impl SolverConfig {
    pub fn for_kind(kind: ModelKind) -> Self {
        SolverConfig {
            c: match kind {
                ModelKind::Logreg => 1000.0,
                ModelKind::LinearSvm => 100.0,
            },
            tol: 1e-6,
            max_iter: 10_000,
            fit_bias: true,
            seed: 42,
        }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Config(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Weights and biases of a trained classifier.
///
/// Binary models hold a single weight vector scoring `classes[1]`; one-vs-rest
/// models hold one vector per class.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel<F> {
    pub kind: ModelKind,
    pub classes: Vec<String>,
    pub weights: Vec<Vec<F>>,
    pub bias: Vec<F>,
    pub config: SolverConfig,
    pub vocab_fingerprint: String,
    /// False when a solver stopped at `max_iter` or stalled above tolerance.
    pub converged: bool,
}

impl<F: Scalar> LinearModel<F> {
    pub fn is_binary(&self) -> bool {
        self.weights.len() == 1
    }

    pub fn n_features(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// Checks shape and finiteness invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InconsistentBundle(m));
        let expected_vectors = if self.classes.len() == 2 {
            1
        } else {
            self.classes.len()
        };
        if self.classes.len() < 2 {
            return bad(format!("model has {} classes", self.classes.len()));
        }
        if self.weights.len() != expected_vectors || self.bias.len() != expected_vectors {
            return bad(format!(
                "{} classes need {expected_vectors} weight vectors, found {} and {} biases",
                self.classes.len(),
                self.weights.len(),
                self.bias.len()
            ));
        }
        let v = self.n_features();
        if self.weights.iter().any(|w| w.len() != v) {
            return bad("weight vectors differ in length".into());
        }
        if self
            .weights
            .iter()
            .flatten()
            .chain(&self.bias)
            .any(|x| !x.is_finite())
        {
            return bad("non-finite weight".into());
        }
        Ok(())
    }
}

/// `w_c · x + b_c` per row and weight vector (one column for binary models).
pub fn decision_scores<F: Scalar>(model: &LinearModel<F>, x: &CsrMatrix<F>) -> Result<Vec<Vec<F>>> {
    if x.n_cols() != model.n_features() {
        return Err(Error::Dimension {
            expected: model.n_features(),
            actual: x.n_cols(),
        });
    }
    Ok(x.rows()
        .map(|(cols, vals)| {
            model
                .weights
                .iter()
                .zip(&model.bias)
                .map(|(w, &b)| sparse_dot(cols, vals, w) + b)
                .collect()
        })
        .collect())
}

/// Predicted class index per row. Binary: `classes[1]` iff score > 0. Multiclass:
/// argmax, ties to the lowest class index.
pub fn predict<F: Scalar>(model: &LinearModel<F>, x: &CsrMatrix<F>) -> Result<Vec<usize>> {
    let scores = decision_scores(model, x)?;
    Ok(scores.iter().map(|s| predict_from_scores(s)).collect())
}

pub(crate) fn predict_from_scores<F: Scalar>(scores: &[F]) -> usize {
    if scores.len() == 1 {
        return (scores[0] > F::zero()) as usize;
    }
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}
