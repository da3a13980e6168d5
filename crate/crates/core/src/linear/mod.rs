//! L2-regularized linear classifiers on sparse features.
//!
//! Both trainers minimize `½‖w‖² + C·Σ loss(yᵢ(w·xᵢ + b))`, C weighting the loss.

pub mod logreg;
mod model;
mod ovr;
pub mod svm;

pub use model::{decision_scores, predict, LinearModel, ModelKind, SolverConfig};
pub use ovr::train_ovr;

use crate::error::{Error, Result};
use crate::features::CsrMatrix;
use crate::scalar::Scalar;

/// Raw binary fit shared by both trainers.
#[derive(Clone, Debug)]
pub(crate) struct BinaryFit<F> {
    pub weights: Vec<F>,
    pub bias: F,
    pub converged: bool,
}

fn check_binary<F>(x: &CsrMatrix<F>, y: &[bool]) -> Result<()>
where
    F: Copy,
{
    if x.n_rows() != y.len() {
        return Err(Error::Dimension {
            expected: x.n_rows(),
            actual: y.len(),
        });
    }
    if !y.iter().any(|&v| v) || !y.iter().any(|&v| !v) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

pub(crate) fn fit_binary<F: Scalar>(
    kind: ModelKind,
    x: &CsrMatrix<F>,
    y: &[bool],
    cfg: &SolverConfig,
) -> Result<BinaryFit<F>> {
    cfg.validate()?;
    check_binary(x, y)?;
    Ok(match kind {
        ModelKind::Logreg => {
            let s = logreg::solve(x, y, cfg);
            BinaryFit {
                weights: s.weights,
                bias: s.bias,
                converged: s.converged,
            }
        }
        ModelKind::LinearSvm => {
            let s = svm::solve(x, y, cfg);
            BinaryFit {
                weights: s.weights,
                bias: s.bias,
                converged: s.converged,
            }
        }
    })
}

fn binary_model<F: Scalar>(
    kind: ModelKind,
    x: &CsrMatrix<F>,
    y: &[bool],
    cfg: &SolverConfig,
) -> Result<LinearModel<F>> {
    let fit = fit_binary(kind, x, y, cfg)?;
    Ok(LinearModel {
        kind,
        classes: vec!["negative".into(), "positive".into()],
        weights: vec![fit.weights],
        bias: vec![fit.bias],
        config: cfg.clone(),
        vocab_fingerprint: String::new(),
        converged: fit.converged,
    })
}

/// Binary L2-regularized logistic regression; `y[i]` is true for the positive class.
pub fn train_logreg<F: Scalar>(
    x: &CsrMatrix<F>,
    y: &[bool],
    cfg: &SolverConfig,
) -> Result<LinearModel<F>> {
    binary_model(ModelKind::Logreg, x, y, cfg)
}

/// Binary hinge-loss linear SVM; `y[i]` is true for the positive class.
pub fn train_linear_svm<F: Scalar>(
    x: &CsrMatrix<F>,
    y: &[bool],
    cfg: &SolverConfig,
) -> Result<LinearModel<F>> {
    binary_model(ModelKind::LinearSvm, x, y, cfg)
}

/// `w · x_row` for a sparse row.
#[inline]
pub(crate) fn sparse_dot<F: Scalar>(cols: &[usize], vals: &[F], w: &[F]) -> F {
    let mut s = F::zero();
    for (&c, &v) in cols.iter().zip(vals) {
        s += w[c] * v;
    }
    s
}

#[inline]
pub(crate) fn sparse_axpy<F: Scalar>(a: F, cols: &[usize], vals: &[F], out: &mut [F]) {
    for (&c, &v) in cols.iter().zip(vals) {
        out[c] += a * v;
    }
}
