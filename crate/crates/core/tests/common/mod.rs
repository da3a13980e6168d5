//! Brute-force reference computations shared by the integration tests.
#![allow(dead_code, clippy::excessive_precision, clippy::approx_constant)]

use newsclf::features::CsrMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn csr(n_cols: usize, rows: &[Vec<f64>]) -> CsrMatrix<f64> {
    let mut offsets = vec![0];
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for row in rows {
        assert_eq!(row.len(), n_cols);
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                cols.push(j);
                vals.push(v);
            }
        }
        offsets.push(vals.len());
    }
    CsrMatrix::new(n_cols, offsets, cols, vals).unwrap()
}

/// Minimizer of a unimodal `f` on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Direct evaluation of `½w² + C·Σ ln(1 + e^(−yᵢ w xᵢ))` in one dimension.
pub fn logistic_1d(points: &[(f64, f64)], c: f64, w: f64) -> f64 {
    0.5 * w * w
        + c * points
            .iter()
            .map(|&(x, y)| (1.0 + (-y * w * x).exp()).ln())
            .sum::<f64>()
}

/// Direct evaluation of `½w² + C·Σ max(0, 1 − yᵢ w xᵢ)` in one dimension.
pub fn hinge_1d(points: &[(f64, f64)], c: f64, w: f64) -> f64 {
    0.5 * w * w
        + c * points
            .iter()
            .map(|&(x, y)| (1.0 - y * w * x).max(0.0))
            .sum::<f64>()
}

/// Best point of the two-variable SVM dual on a `steps × steps` grid over
/// `[0, C]²`, for 1-D points without intercept: `(α₁, α₂, dual value)`.
pub fn dual_grid_2(points: [(f64, f64); 2], c: f64, steps: usize) -> (f64, f64, f64) {
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..=steps {
        for j in 0..=steps {
            let a1 = c * i as f64 / steps as f64;
            let a2 = c * j as f64 / steps as f64;
            let w = a1 * points[0].1 * points[0].0 + a2 * points[1].1 * points[1].0;
            let d = a1 + a2 - 0.5 * w * w;
            if d > best.2 {
                best = (a1, a2, d);
            }
        }
    }
    best
}

/// Random dense instance with both labels present.
pub fn random_instance(seed: u64, max_rows: usize, max_cols: usize) -> (Vec<Vec<f64>>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_rows);
    let d = rng.gen_range(1..=max_cols);
    let rows = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        0.0
                    } else {
                        rng.gen_range(-2.0..2.0)
                    }
                })
                .collect()
        })
        .collect();
    let mut y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    y[0] = true;
    y[1] = false;
    (rows, y)
}

pub const TOY_DOCS: [&str; 5] = [
    "The cat sat on the mat",
    "The dog sat on the log",
    "The cat chased the dog",
    "A cat and a dog",
    "The bird sang",
];

/// Toy matrix rows, evaluated at 30 significant digits and rounded to 20.
pub const TOY_TERMS: [&str; 9] = [
    "cat", "dog", "on", "on the", "sat", "sat on", "the", "the cat", "the dog",
];
pub const TOY_FROZEN: [[f64; 9]; 5] = [
    [
        0.30032535650430722271,
        0.0,
        0.36179840230995937758,
        0.36179840230995937758,
        0.36179840230995937758,
        0.36179840230995937758,
        0.50528631553839321838,
        0.36179840230995937758,
        0.0,
    ],
    [
        0.0,
        0.30032535650430722271,
        0.36179840230995937758,
        0.36179840230995937758,
        0.36179840230995937758,
        0.36179840230995937758,
        0.50528631553839321838,
        0.0,
        0.36179840230995937758,
    ],
    [
        0.35959990043074946819,
        0.35959990043074946819,
        0.0,
        0.0,
        0.0,
        0.0,
        0.6050135455479615192,
        0.43320574380072272368,
        0.43320574380072272368,
    ],
    [
        0.7071067811865475244,
        0.7071067811865475244,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
];

/// Straight-line tf-idf: ASCII lowercase words of two or more characters plus
/// adjacent pairs, `min_df ≤ df ≤ ⌊max_num·N/max_den⌋`, smooth idf, unit rows.
pub fn naive_tfidf(
    docs: &[&str],
    min_df: usize,
    max_num: usize,
    max_den: usize,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let tokens: Vec<Vec<String>> = docs
        .iter()
        .map(|d| {
            let lower = d.to_lowercase();
            let words: Vec<String> = lower
                .split(|c: char| !c.is_ascii_alphanumeric())
                .filter(|w| w.len() >= 2)
                .map(String::from)
                .collect();
            let mut all = words.clone();
            for pair in words.windows(2) {
                all.push(format!("{} {}", pair[0], pair[1]));
            }
            all
        })
        .collect();
    let n = docs.len();
    let mut terms: Vec<String> = tokens.iter().flatten().cloned().collect();
    terms.sort();
    terms.dedup();
    let df = |t: &String| tokens.iter().filter(|d| d.contains(t)).count();
    terms.retain(|t| df(t) >= min_df && df(t) * max_den <= max_num * n);
    let idf: Vec<f64> = terms
        .iter()
        .map(|t| ((1.0 + n as f64) / (1.0 + df(t) as f64)).ln() + 1.0)
        .collect();
    let rows = tokens
        .iter()
        .map(|d| {
            let raw: Vec<f64> = terms
                .iter()
                .zip(&idf)
                .map(|(t, w)| d.iter().filter(|x| *x == t).count() as f64 * w)
                .collect();
            let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            raw.iter()
                .map(|v| if norm > 0.0 { v / norm } else { 0.0 })
                .collect()
        })
        .collect();
    (terms, rows)
}
