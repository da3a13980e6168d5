use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `counts[i][j]` = documents of true class `i` predicted as class `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn zeros(classes: Vec<String>) -> Self {
        let k = classes.len();
        ConfusionMatrix {
            classes,
            counts: vec![vec![0; k]; k],
        }
    }

    /// Binary matrix with classes `[negative, positive]`.
    pub fn binary(negative: &str, positive: &str, tn: u64, fp: u64, fn_: u64, tp: u64) -> Self {
        ConfusionMatrix {
            classes: vec![negative.into(), positive.into()],
            counts: vec![vec![tn, fp], vec![fn_, tp]],
        }
    }

    pub fn from_predictions(classes: Vec<String>, truth: &[usize], predicted: &[usize]) -> Self {
        let mut cm = ConfusionMatrix::zeros(classes);
        for (&t, &p) in truth.iter().zip(predicted) {
            cm.counts[t][p] += 1;
        }
        cm
    }

    pub fn class_index(&self, class: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == class)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// With a positive class, `precision`/`recall`/`f1` describe that class;
/// otherwise they are unweighted means over the classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub positive: Option<String>,
    pub per_class: Vec<ClassMetrics>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Accuracy plus precision/recall/F1. Undefined ratios (0/0) are 0.
pub fn compute_metrics(cm: &ConfusionMatrix, positive: Option<&str>) -> Result<Metrics> {
    let k = cm.classes.len();
    let per_class: Vec<ClassMetrics> = (0..k)
        .map(|c| {
            let tp = cm.counts[c][c];
            let predicted: u64 = (0..k).map(|i| cm.counts[i][c]).sum();
            let support: u64 = cm.counts[c].iter().sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            ClassMetrics {
                class: cm.classes[c].clone(),
                precision,
                recall,
                f1: f1(precision, recall),
                support,
            }
        })
        .collect();
    let accuracy = ratio(cm.trace(), cm.total());
    let (precision, recall, f1) = match positive {
        Some(p) => {
            let c = cm
                .class_index(p)
                .ok_or_else(|| Error::UnknownClass(p.to_string()))?;
            (per_class[c].precision, per_class[c].recall, per_class[c].f1)
        }
        None => {
            let n = k.max(1) as f64;
            (
                per_class.iter().map(|m| m.precision).sum::<f64>() / n,
                per_class.iter().map(|m| m.recall).sum::<f64>() / n,
                per_class.iter().map(|m| m.f1).sum::<f64>() / n,
            )
        }
    };
    Ok(Metrics {
        accuracy,
        precision,
        recall,
        f1,
        positive: positive.map(str::to_string),
        per_class,
    })
}
