use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    L2,
}

/// Smooth-idf weights, raw term frequency, L2 row normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct TfidfModel<F> {
    idf: Vec<F>,
}

impl<F: Scalar> TfidfModel<F> {
    pub fn from_idf(idf: Vec<F>) -> Result<Self> {
        if let Some(bad) = idf
            .iter()
            .find(|&&v| v.partial_cmp(&F::one()).is_none_or(|o| o.is_lt()) || !v.is_finite())
        {
            return Err(Error::Config(format!(
                "idf weight {bad} is below 1 or not finite"
            )));
        }
        Ok(TfidfModel { idf })
    }

    pub fn idf(&self) -> &[F] {
        &self.idf
    }

    pub fn sublinear_tf(&self) -> bool {
        false
    }

    pub fn normalization(&self) -> Normalization {
        Normalization::L2
    }
}

/// `idf[t] = ln((1 + N) / (1 + df[t])) + 1`, with `df[t]` the number of rows
/// holding a nonzero count in column `t`.
pub fn fit_tfidf<F: Scalar>(counts: &CsrMatrix<u32>) -> Result<TfidfModel<F>> {
    if counts.n_rows() == 0 {
        return Err(Error::Config(
            "cannot fit idf weights on zero documents".into(),
        ));
    }
    let mut df = vec![0usize; counts.n_cols()];
    for (&c, &v) in counts.col_indices().iter().zip(counts.values()) {
        if v > 0 {
            df[c] += 1;
        }
    }
    let n1 = F::from_count(counts.n_rows() + 1);
    let idf = df
        .into_iter()
        .map(|d| (n1 / F::from_count(d + 1)).ln() + F::one())
        .collect();
    Ok(TfidfModel { idf })
}

/// Weights counts by idf and scales each nonzero row to unit Euclidean norm.
pub fn transform_tfidf<F: Scalar>(
    counts: &CsrMatrix<u32>,
    model: &TfidfModel<F>,
) -> Result<CsrMatrix<F>> {
    if model.idf.len() != counts.n_cols() {
        return Err(Error::Dimension {
            expected: model.idf.len(),
            actual: counts.n_cols(),
        });
    }
    let weighted = counts.map_values(|c, v| F::from_count(v as usize) * model.idf[c]);
    let mut norms = Vec::with_capacity(weighted.n_rows());
    for (_, vals) in weighted.rows() {
        let sq: F = vals.iter().map(|&v| v * v).sum();
        norms.push(sq.sqrt());
    }
    let mut out_values = Vec::with_capacity(weighted.nnz());
    for (r, (_, vals)) in weighted.rows().enumerate() {
        let n = norms[r];
        out_values.extend(vals.iter().map(|&v| if n > F::zero() { v / n } else { v }));
    }
    CsrMatrix::new(
        weighted.n_cols(),
        weighted.row_offsets().to_vec(),
        weighted.col_indices().to_vec(),
        out_values,
    )
}
