//! Metrics, cross validation, learning/validation curves and the evaluation
//! protocols.

mod curves;
mod cv;
mod metrics;
mod protocol;

pub use curves::{learning_curve, validation_curve, write_curve_csv, CurvePoint, DEFAULT_C_GRID};
pub use cv::{cross_validate, cross_validate_partitions, CvResult, FoldResult};
pub use metrics::{compute_metrics, ClassMetrics, ConfusionMatrix, Metrics};
pub use protocol::{
    evaluate_bundle, fit_bundle, run_protocol, select_articles, EvalReport, Protocol,
    ProtocolParams, ReportConfig, TrainParams,
};
