//! Text → L2-normalized tf-idf document-term matrix.

mod pipeline;
mod sparse;
mod tfidf;
mod tokenize;
mod vocab;

pub use pipeline::{FittedPipeline, PipelineParams};
pub use sparse::CsrMatrix;
pub use tfidf::{fit_tfidf, transform_tfidf, Normalization, TfidfModel};
pub use tokenize::{fold_case, tokenize, TokenizerConfig};
pub use vocab::{count_vectorize, fit_vocabulary, write_vocabulary, VocabParams, Vocabulary};
