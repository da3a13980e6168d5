//! Hinge-loss linear SVM by dual coordinate descent.
//!
//! The intercept is an extra constant feature of value 1 whose weight is
//! regularized like the others, which keeps the dual a pure box problem:
//!
//! ```text
//! max_α  Σαᵢ − ½‖Σ αᵢ yᵢ x̃ᵢ‖²   subject to 0 ≤ αᵢ ≤ C
//! ```
//!
//! Coordinates are visited in a fresh seeded permutation every epoch. After each
//! epoch `w` is rebuilt from `α` and the solver stops once the duality gap is
//! at most `tol·(1 + |primal|)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sparse_axpy, sparse_dot, SolverConfig};
use crate::features::CsrMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SvmSolution<F> {
    pub weights: Vec<F>,
    pub bias: F,
    pub alpha: Vec<F>,
    /// epochs run
    pub iterations: usize,
    pub converged: bool,
    pub primal: F,
    pub dual: F,
}

impl<F: Scalar> SvmSolution<F> {
    pub fn gap(&self) -> F {
        self.primal - self.dual
    }
}

/// `w = Σ αᵢ yᵢ xᵢ` and the intercept weight `Σ αᵢ yᵢ` (zero without bias).
pub fn weights_from_alpha<F: Scalar>(
    x: &CsrMatrix<F>,
    y: &[bool],
    alpha: &[F],
    fit_bias: bool,
) -> (Vec<F>, F) {
    let mut w = vec![F::zero(); x.n_cols()];
    let mut b = F::zero();
    for (i, (cols, vals)) in x.rows().enumerate() {
        if alpha[i] == F::zero() {
            continue;
        }
        let ay = if y[i] { alpha[i] } else { -alpha[i] };
        sparse_axpy(ay, cols, vals, &mut w);
        if fit_bias {
            b += ay;
        }
    }
    (w, b)
}

/// `½(‖w‖² + b²) + C·Σ max(0, 1 − yᵢ(w·xᵢ + b))`.
pub fn primal_objective<F: Scalar>(x: &CsrMatrix<F>, y: &[bool], c: F, w: &[F], b: F) -> F {
    let half = F::from_f64_lossy(0.5);
    let reg = half * (w.iter().map(|&v| v * v).sum::<F>() + b * b);
    let loss: F = x
        .rows()
        .zip(y)
        .map(|((cols, vals), &yi)| {
            let s = sparse_dot(cols, vals, w) + b;
            let m = if yi { s } else { -s };
            (F::one() - m).max(F::zero())
        })
        .sum();
    reg + c * loss
}

/// `Σαᵢ − ½(‖w‖² + b²)` with `(w, b)` built from `α`.
pub fn dual_objective<F: Scalar>(alpha: &[F], w: &[F], b: F) -> F {
    let half = F::from_f64_lossy(0.5);
    alpha.iter().copied().sum::<F>() - half * (w.iter().map(|&v| v * v).sum::<F>() + b * b)
}

pub fn solve<F: Scalar>(x: &CsrMatrix<F>, y: &[bool], cfg: &SolverConfig) -> SvmSolution<F> {
    let n = x.n_rows();
    let c = F::from_f64_lossy(cfg.c);
    let tol = F::from_f64_lossy(cfg.tol);
    let bias_feature = if cfg.fit_bias { F::one() } else { F::zero() };
    let sign = |i: usize| if y[i] { F::one() } else { -F::one() };

    let diag: Vec<F> = x
        .rows()
        .map(|(_, vals)| vals.iter().map(|&v| v * v).sum::<F>() + bias_feature * bias_feature)
        .collect();
    let mut alpha = vec![F::zero(); n];
    let mut w = vec![F::zero(); x.n_cols()];
    let mut b = F::zero();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut iterations = 0;
    let mut converged = false;
    let (mut primal, mut dual) = (F::zero(), F::zero());
    while iterations < cfg.max_iter {
        iterations += 1;
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut moved = false;
        for &i in &order {
            let (cols, vals) = x.row(i);
            let yi = sign(i);
            let grad = yi * (sparse_dot(cols, vals, &w) + b * bias_feature) - F::one();
            let projected = if alpha[i] == F::zero() {
                grad.min(F::zero())
            } else if alpha[i] == c {
                grad.max(F::zero())
            } else {
                grad
            };
            if projected == F::zero() {
                continue;
            }
            let old = alpha[i];
            alpha[i] = if diag[i] > F::zero() {
                (old - grad / diag[i]).max(F::zero()).min(c)
            } else if grad < F::zero() {
                // no curvature: the dual is linear in αᵢ and increases toward C
                c
            } else {
                F::zero()
            };
            let delta = (alpha[i] - old) * yi;
            if delta != F::zero() {
                moved = true;
                sparse_axpy(delta, cols, vals, &mut w);
                b += delta * bias_feature;
            }
        }
        (w, b) = weights_from_alpha(x, y, &alpha, cfg.fit_bias);
        primal = primal_objective(x, y, c, &w, b);
        dual = dual_objective(&alpha, &w, b);
        if primal - dual <= tol * (F::one() + primal.abs()) {
            converged = true;
            break;
        }
        if !moved {
            break;
        }
    }
    SvmSolution {
        weights: w,
        bias: b,
        alpha,
        iterations,
        converged,
        primal,
        dual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::ModelKind;

    fn two_points() -> (CsrMatrix<f64>, Vec<bool>) {
        let x = CsrMatrix::new(1, vec![0, 1, 2], vec![0, 0], vec![1.0, -1.0]).unwrap();
        (x, vec![true, false])
    }

    fn cfg(c: f64, fit_bias: bool) -> SolverConfig {
        SolverConfig {
            c,
            fit_bias,
            ..SolverConfig::for_kind(ModelKind::LinearSvm)
        }
    }

    #[test]
    fn symmetric_pair_large_c() {
        let (x, y) = two_points();
        let s = solve(&x, &y, &cfg(100.0, false));
        assert!(s.converged);
        assert_eq!(s.weights, vec![1.0]);
        assert_eq!(s.alpha.iter().sum::<f64>(), 1.0);
        assert_eq!(s.gap(), 0.0);
    }

    #[test]
    fn symmetric_pair_box_bound() {
        let (x, y) = two_points();
        let s = solve(&x, &y, &cfg(0.25, false));
        assert_eq!(s.alpha, vec![0.25, 0.25]);
        assert_eq!(s.weights, vec![0.5]);
    }

    #[test]
    fn empty_rows_without_bias_go_to_the_bound() {
        let x = CsrMatrix::new(1, vec![0, 1, 1], vec![0], vec![1.0]).unwrap();
        let s = solve(&x, &[true, false], &cfg(2.0, false));
        assert_eq!(s.alpha[1], 2.0);
        assert!(s.converged);
    }
}
