use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{fit_binary, LinearModel, ModelKind, SolverConfig};
use crate::error::{Error, Result};
use crate::features::CsrMatrix;
use crate::hashing::derive_seed;
use crate::scalar::Scalar;

/// One-vs-rest over the distinct labels, sorted lexicographically.
///
/// With two classes a single binary model scoring `classes[1]` is trained, which
/// is what one-vs-rest reduces to under the argmax rule. Otherwise one member per
/// class is trained (concurrently) with a seed derived from the class index.
pub fn train_ovr<F: Scalar, S: AsRef<str> + Sync>(
    x: &CsrMatrix<F>,
    labels: &[S],
    cfg: &SolverConfig,
    kind: ModelKind,
) -> Result<LinearModel<F>> {
    cfg.validate()?;
    if labels.len() != x.n_rows() {
        return Err(Error::Dimension {
            expected: x.n_rows(),
            actual: labels.len(),
        });
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l.as_ref()).or_insert(0) += 1;
    }
    if counts.len() < 2 {
        return Err(Error::SingleClass);
    }
    if let Some((class, &count)) = counts.iter().find(|(_, &n)| n < 2) {
        return Err(Error::ClassTooSmall {
            class: class.to_string(),
            count,
            needed: 2,
        });
    }
    let classes: Vec<String> = counts.keys().map(|s| s.to_string()).collect();

    let fits = if classes.len() == 2 {
        let y: Vec<bool> = labels.iter().map(|l| l.as_ref() == classes[1]).collect();
        vec![fit_binary(kind, x, &y, cfg)?]
    } else {
        classes
            .par_iter()
            .enumerate()
            .map(|(k, class)| {
                let y: Vec<bool> = labels.iter().map(|l| l.as_ref() == class).collect();
                let member = SolverConfig {
                    seed: derive_seed(cfg.seed, "ovr", &[k as u64]),
                    ..cfg.clone()
                };
                fit_binary(kind, x, &y, &member)
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(LinearModel {
        kind,
        converged: fits.iter().all(|f| f.converged),
        weights: fits.iter().map(|f| f.weights.clone()).collect(),
        bias: fits.iter().map(|f| f.bias).collect(),
        classes,
        config: cfg.clone(),
        vocab_fingerprint: String::new(),
    })
}
