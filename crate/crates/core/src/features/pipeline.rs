use std::borrow::Borrow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use super::tfidf::{fit_tfidf, transform_tfidf, TfidfModel};
use super::tokenize::{tokenize, TokenizerConfig};
use super::vocab::{count_vectorize, fit_vocabulary, VocabParams, Vocabulary};
use crate::corpus::Article;
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub tokenizer: TokenizerConfig,
    pub vocab: VocabParams,
}

/// Tokenizer settings, vocabulary and idf weights fitted on a training corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedPipeline<F> {
    pub tokenizer: TokenizerConfig,
    pub vocab: Vocabulary,
    pub tfidf: TfidfModel<F>,
}

fn tokenize_all<T: AsRef<str> + Sync>(texts: &[T], cfg: &TokenizerConfig) -> Vec<Vec<String>> {
    texts
        .par_iter()
        .map(|t| tokenize(t.as_ref(), cfg))
        .collect()
}

fn texts_of<A: Borrow<Article>>(articles: &[A]) -> Vec<String> {
    articles
        .iter()
        .map(|a| a.borrow().document_text())
        .collect()
}

impl<F: Scalar> FittedPipeline<F> {
    /// tokenize → vocabulary → counts → idf → tf-idf, all fitted on `texts`.
    pub fn fit_texts<T: AsRef<str> + Sync>(
        texts: &[T],
        params: &PipelineParams,
    ) -> Result<(Self, CsrMatrix<F>)> {
        params.tokenizer.validate()?;
        let docs = tokenize_all(texts, &params.tokenizer);
        let vocab = fit_vocabulary(&docs, &params.vocab)?;
        let counts = count_vectorize(&docs, &vocab);
        let tfidf = fit_tfidf(&counts)?;
        let matrix = transform_tfidf(&counts, &tfidf)?;
        Ok((
            FittedPipeline {
                tokenizer: params.tokenizer.clone(),
                vocab,
                tfidf,
            },
            matrix,
        ))
    }

    /// Fits on the articles' `title + "\n" + body` texts.
    pub fn fit<A: Borrow<Article>>(
        articles: &[A],
        params: &PipelineParams,
    ) -> Result<(Self, CsrMatrix<F>)> {
        Self::fit_texts(&texts_of(articles), params)
    }

    pub fn transform_texts<T: AsRef<str> + Sync>(&self, texts: &[T]) -> Result<CsrMatrix<F>> {
        let docs = tokenize_all(texts, &self.tokenizer);
        transform_tfidf(&count_vectorize(&docs, &self.vocab), &self.tfidf)
    }

    pub fn transform<A: Borrow<Article>>(&self, articles: &[A]) -> Result<CsrMatrix<F>> {
        self.transform_texts(&texts_of(articles))
    }
}
