//! Satire / fake-news text classification toolkit.
//!
//! The pipeline runs in four stages:
//!
//! * [`corpus`]: JSONL article loading, boilerplate stripping, length filtering,
//!   date normalization and deterministic train/test partitions.
//! * [`features`]: uni+bi-gram tokenization, document-frequency pruned vocabulary,
//!   sparse count vectors and smooth-idf tf-idf weighting with L2 row normalization.
//! * [`linear`]: L2-regularized logistic regression (Newton-CG on the primal) and
//!   hinge-loss linear SVM (dual coordinate descent), plus one-vs-rest.
//! * [`eval`]: confusion matrices, metrics, k-fold cross validation, learning and
//!   validation curves and the four named evaluation protocols.
//!
//! [`persist`] stores a fitted pipeline as a checksummed, versioned bundle.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); ratios such as the
//! test fraction and the max-df cutoff are exact [`Fraction`]s. The `f64` aliases
//! below are what the command-line tool uses.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod fraction;
pub mod hashing;
pub mod linear;
pub mod persist;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use fraction::Fraction;
pub use scalar::Scalar;

/// Sparse tf-idf document-term matrix in double precision.
pub type TfidfMatrix = features::CsrMatrix<f64>;
/// Sparse count matrix.
pub type CountMatrix = features::CsrMatrix<u32>;
pub type TfidfModel = features::TfidfModel<f64>;
pub type LinearModel = linear::LinearModel<f64>;
pub type ModelBundle = persist::ModelBundle<f64>;
pub type FittedPipeline = features::FittedPipeline<f64>;

pub type TfidfMatrix32 = features::CsrMatrix<f32>;
pub type LinearModel32 = linear::LinearModel<f32>;
pub type ModelBundle32 = persist::ModelBundle<f32>;
