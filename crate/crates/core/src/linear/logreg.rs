//! Logistic regression by Newton-CG on the primal.
//!
//! Minimizes `½‖w‖² + C·Σ ln(1 + exp(−yᵢ(w·xᵢ + b)))` with an unregularized
//! intercept. Each iteration solves the Newton system with conjugate gradients
//! using Hessian-vector products, then backtracks along the direction until the
//! Armijo condition holds. Stops once `‖∇F‖∞ ≤ tol`.

use std::cmp::Ordering;

use super::{sparse_axpy, sparse_dot, SolverConfig};
use crate::features::CsrMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct LogregSolution<F> {
    pub weights: Vec<F>,
    pub bias: F,
    pub iterations: usize,
    pub converged: bool,
    pub objective: F,
    /// `‖∇F‖∞` at the returned point.
    pub grad_inf: F,
}

/// `ln(1 + e^t)` without overflow.
fn softplus<F: Scalar>(t: F) -> F {
    t.max(F::zero()) + (-t.abs()).exp().ln_1p()
}

/// Logistic sigmoid without overflow.
fn sigmoid<F: Scalar>(t: F) -> F {
    if t >= F::zero() {
        F::one() / (F::one() + (-t).exp())
    } else {
        let e = t.exp();
        e / (F::one() + e)
    }
}

fn sign<F: Scalar>(y: bool) -> F {
    if y {
        F::one()
    } else {
        -F::one()
    }
}

/// The objective over the stacked parameter vector `θ = (w, b)`; `b` is present
/// only when the bias is fitted.
struct Problem<'a, F> {
    x: &'a CsrMatrix<F>,
    y: Vec<F>,
    c: F,
    dim: usize,
    fit_bias: bool,
}

impl<'a, F: Scalar> Problem<'a, F> {
    fn new(x: &'a CsrMatrix<F>, y: &[bool], c: F, fit_bias: bool) -> Self {
        Problem {
            x,
            y: y.iter().map(|&v| sign(v)).collect(),
            c,
            dim: x.n_cols() + fit_bias as usize,
            fit_bias,
        }
    }

    fn n_features(&self) -> usize {
        self.x.n_cols()
    }

    /// `X θ` including the intercept.
    fn apply(&self, theta: &[F]) -> Vec<F> {
        let b = if self.fit_bias {
            theta[self.n_features()]
        } else {
            F::zero()
        };
        self.x
            .rows()
            .map(|(cols, vals)| sparse_dot(cols, vals, theta) + b)
            .collect()
    }

    /// `Xᵀ u` including the intercept row.
    fn apply_t(&self, u: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (i, (cols, vals)) in self.x.rows().enumerate() {
            sparse_axpy(u[i], cols, vals, &mut out);
        }
        if self.fit_bias {
            out[self.n_features()] = u.iter().copied().sum();
        }
        out
    }

    fn reg(&self, theta: &[F]) -> F {
        let half = F::from_f64_lossy(0.5);
        half * theta[..self.n_features()].iter().map(|&v| v * v).sum::<F>()
    }

    fn objective(&self, theta: &[F], z: &[F]) -> F {
        let loss: F = z
            .iter()
            .zip(&self.y)
            .map(|(&zi, &yi)| softplus(-yi * zi))
            .sum();
        self.reg(theta) + self.c * loss
    }

    fn gradient(&self, theta: &[F], z: &[F]) -> Vec<F> {
        let u: Vec<F> = z
            .iter()
            .zip(&self.y)
            .map(|(&zi, &yi)| -self.c * yi * sigmoid(-yi * zi))
            .collect();
        let mut g = self.apply_t(&u);
        for (gj, &tj) in g.iter_mut().zip(&theta[..self.n_features()]) {
            *gj += tj;
        }
        g
    }

    /// `H v = v_w + C·Xᵀ D X v`, with `D = σ(m)σ(−m)`.
    fn hess_vec(&self, d: &[F], v: &[F]) -> Vec<F> {
        let xv = self.apply(v);
        let u: Vec<F> = xv.iter().zip(d).map(|(&a, &di)| self.c * di * a).collect();
        let mut out = self.apply_t(&u);
        for (o, &vj) in out.iter_mut().zip(&v[..self.n_features()]) {
            *o += vj;
        }
        out
    }
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn inf_norm<F: Scalar>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |m, &x| m.max(x.abs()))
}

/// Conjugate gradients on `H d = −g`, stopped at relative residual `eta`.
fn newton_direction<F: Scalar>(p: &Problem<F>, curvature: &[F], g: &[F], eta: F) -> Vec<F> {
    let mut d = vec![F::zero(); p.dim];
    let mut r: Vec<F> = g.iter().map(|&v| -v).collect();
    let mut dir = r.clone();
    let mut rr = dot(&r, &r);
    let target = eta * rr.sqrt();
    let max_cg = p.dim.clamp(10, 250);
    for _ in 0..max_cg {
        if rr.sqrt() <= target {
            break;
        }
        let hd = p.hess_vec(curvature, &dir);
        let dhd = dot(&dir, &hd);
        if dhd <= F::zero() {
            break;
        }
        let a = rr / dhd;
        for j in 0..p.dim {
            d[j] += a * dir[j];
            r[j] -= a * hd[j];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for j in 0..p.dim {
            dir[j] = r[j] + beta * dir[j];
        }
        rr = rr_new;
    }
    d
}

pub fn solve<F: Scalar>(x: &CsrMatrix<F>, y: &[bool], cfg: &SolverConfig) -> LogregSolution<F> {
    let p = Problem::new(x, y, F::from_f64_lossy(cfg.c), cfg.fit_bias);
    let tol = F::from_f64_lossy(cfg.tol);
    let half = F::from_f64_lossy(0.5);
    let armijo = F::from_f64_lossy(1e-4);
    let slack = F::epsilon() * F::from_f64_lossy(16.0);

    let mut theta = vec![F::zero(); p.dim];
    let mut z = p.apply(&theta);
    let mut f = p.objective(&theta, &z);
    let mut g = p.gradient(&theta, &z);
    let mut iterations = 0;
    let mut converged = inf_norm(&g) <= tol;

    while !converged && iterations < cfg.max_iter {
        iterations += 1;
        let curvature: Vec<F> = z
            .iter()
            .zip(&p.y)
            .map(|(&zi, &yi)| {
                let s = sigmoid(yi * zi);
                s * (F::one() - s)
            })
            .collect();
        let gnorm = dot(&g, &g).sqrt();
        let eta = half.min(gnorm.sqrt());
        let mut d = newton_direction(&p, &curvature, &g, eta);
        let mut gd = dot(&g, &d);
        if gd.partial_cmp(&F::zero()) != Some(Ordering::Less) {
            d = g.iter().map(|&v| -v).collect();
            gd = -dot(&g, &g);
        }
        let xd = p.apply(&d);
        let mut step = F::one();
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<F> = theta
                .iter()
                .zip(&d)
                .map(|(&t, &dj)| t + step * dj)
                .collect();
            let z_trial: Vec<F> = z.iter().zip(&xd).map(|(&zi, &di)| zi + step * di).collect();
            let f_trial = p.objective(&trial, &z_trial);
            if f_trial <= f + armijo * step * gd + slack * f.abs() {
                accepted = Some(trial);
                break;
            }
            step *= half;
        }
        let Some(next) = accepted else {
            break;
        };
        theta = next;
        z = p.apply(&theta);
        f = p.objective(&theta, &z);
        g = p.gradient(&theta, &z);
        converged = inf_norm(&g) <= tol;
    }

    let bias = if cfg.fit_bias {
        theta.pop().unwrap()
    } else {
        F::zero()
    };
    LogregSolution {
        weights: theta,
        bias,
        iterations,
        converged,
        objective: f,
        grad_inf: inf_norm(&g),
    }
}

/// Objective value at `(w, b)`; `b` is ignored unless `fit_bias`.
pub fn objective<F: Scalar>(
    x: &CsrMatrix<F>,
    y: &[bool],
    c: F,
    w: &[F],
    b: F,
    fit_bias: bool,
) -> F {
    let p = Problem::new(x, y, c, fit_bias);
    let theta = stack(w, b, fit_bias);
    p.objective(&theta, &p.apply(&theta))
}

/// Analytic gradient at `(w, b)`: the weight part, then the bias component when fitted.
pub fn gradient<F: Scalar>(
    x: &CsrMatrix<F>,
    y: &[bool],
    c: F,
    w: &[F],
    b: F,
    fit_bias: bool,
) -> Vec<F> {
    let p = Problem::new(x, y, c, fit_bias);
    let theta = stack(w, b, fit_bias);
    p.gradient(&theta, &p.apply(&theta))
}

fn stack<F: Scalar>(w: &[F], b: F, fit_bias: bool) -> Vec<F> {
    let mut theta = w.to_vec();
    if fit_bias {
        theta.push(b);
    }
    theta
}
