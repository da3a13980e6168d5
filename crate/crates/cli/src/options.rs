use clap::Args;
use newsclf::corpus::{Article, LabelField};
use newsclf::features::{PipelineParams, TokenizerConfig, VocabParams};
use newsclf::linear::{ModelKind, SolverConfig};
use newsclf::Fraction;

use crate::UsageError;

#[derive(Args, Debug, Clone)]
pub struct PipelineArgs {
    /// Drop terms found in fewer documents than this
    #[arg(long, default_value_t = 20)]
    pub min_df: u64,
    /// Drop terms found in more than this fraction of documents
    #[arg(long, default_value = "0.8")]
    pub max_df: Fraction,
    #[arg(long, default_value_t = 1)]
    pub ngram_min: usize,
    #[arg(long, default_value_t = 2)]
    pub ngram_max: usize,
    /// Keep letter case when tokenizing
    #[arg(long)]
    pub no_lowercase: bool,
}

impl PipelineArgs {
    pub fn resolve(&self) -> Result<PipelineParams, UsageError> {
        let tokenizer = TokenizerConfig {
            lowercase: !self.no_lowercase,
            ngram_min: self.ngram_min,
            ngram_max: self.ngram_max,
        };
        tokenizer.validate().map_err(UsageError::from)?;
        if self.max_df.is_zero() || self.max_df > Fraction::from_integer(1) {
            return Err(UsageError(format!(
                "--max-df must lie in (0, 1], got {}",
                self.max_df
            )));
        }
        Ok(PipelineParams {
            tokenizer,
            vocab: VocabParams {
                max_df_ratio: self.max_df,
                min_df_count: self.min_df,
            },
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Classifier: svm or lr
    #[arg(long, default_value = "svm")]
    pub model: ModelKind,
    /// Loss weight C (default 100 for svm, 1000 for lr)
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Fit without an intercept
    #[arg(long)]
    pub no_bias: bool,
}

impl ModelArgs {
    pub fn resolve(&self, seed: u64) -> Result<(ModelKind, SolverConfig), UsageError> {
        let mut solver = SolverConfig::for_kind(self.model);
        if let Some(c) = self.c {
            solver.c = c;
        }
        solver.tol = self.tol;
        solver.max_iter = self.max_iter;
        solver.fit_bias = !self.no_bias;
        solver.seed = seed;
        solver.validate().map_err(UsageError::from)?;
        Ok((self.model, solver))
    }
}

#[derive(Args, Debug, Clone)]
pub struct TaskArg {
    /// Label to predict: satire, paid or publisher
    #[arg(long, default_value = "satire")]
    pub task: LabelField,
}

/// Articles that carry a label for `field`; only the paid flag can be absent.
pub fn labelled(corpus: Vec<Article>, field: LabelField) -> Vec<Article> {
    corpus
        .into_iter()
        .filter(|a| a.label(field).is_some())
        .collect()
}
