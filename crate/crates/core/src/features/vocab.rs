use std::collections::{HashMap, HashSet};
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use super::tfidf::TfidfModel;
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::hashing::{hex64, Fingerprint};
use crate::scalar::Scalar;

/// Document-frequency cutoffs applied when fitting a [`Vocabulary`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabParams {
    pub max_df_ratio: Fraction,
    pub min_df_count: u64,
}

impl Default for VocabParams {
    fn default() -> Self {
        VocabParams {
            max_df_ratio: Fraction::new(4, 5).unwrap(),
            min_df_count: 20,
        }
    }
}

/// Term → column mapping. Terms are sorted by UTF-8 byte order and column
/// indices are dense.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<u64>,
    n_docs: usize,
    params: VocabParams,
    index: HashMap<String, usize>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && self.doc_freq == other.doc_freq
            && self.n_docs == other.n_docs
            && self.params == other.params
    }
}

impl Vocabulary {
    /// Rebuilds a vocabulary from stored parts, checking its invariants.
    pub fn from_parts(
        terms: Vec<String>,
        doc_freq: Vec<u64>,
        n_docs: usize,
        params: VocabParams,
    ) -> Result<Self> {
        if terms.len() != doc_freq.len() {
            return Err(Error::Config(format!(
                "vocabulary has {} terms but {} document frequencies",
                terms.len(),
                doc_freq.len()
            )));
        }
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "vocabulary terms are not strictly sorted".into(),
            ));
        }
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            terms,
            doc_freq,
            n_docs,
            params,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self) -> &[u64] {
        &self.doc_freq
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn params(&self) -> &VocabParams {
        &self.params
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// FNV-1a over the ordered term list.
    pub fn fingerprint(&self) -> String {
        let mut fp = Fingerprint::new();
        for t in &self.terms {
            fp.str(t);
        }
        hex64(fp.finish())
    }
}

/// Keeps the terms with `min_df_count <= df <= floor(max_df_ratio × n_docs)`.
pub fn fit_vocabulary(docs: &[Vec<String>], params: &VocabParams) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::Config(
            "cannot fit a vocabulary on zero documents".into(),
        ));
    }
    let df: HashMap<&str, u64> = docs
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<&str, u64>, doc| {
            let distinct: HashSet<&str> = doc.iter().map(String::as_str).collect();
            for t in distinct {
                *acc.entry(t).or_insert(0) += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (t, n) in b {
                *a.entry(t).or_insert(0) += n;
            }
            a
        });
    let max_df = params.max_df_ratio.mul_floor(docs.len()) as u64;
    let mut kept: Vec<(&str, u64)> = df
        .into_iter()
        .filter(|&(_, n)| n >= params.min_df_count && n <= max_df)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    kept.sort_unstable_by(|a, b| a.0.cmp(b.0));
    let (terms, doc_freq) = kept.into_iter().map(|(t, n)| (t.to_string(), n)).unzip();
    Vocabulary::from_parts(terms, doc_freq, docs.len(), params.clone())
}

/// Term counts per document; out-of-vocabulary terms are ignored.
pub fn count_vectorize(docs: &[Vec<String>], vocab: &Vocabulary) -> CsrMatrix<u32> {
    let rows: Vec<Vec<(usize, u32)>> = docs
        .par_iter()
        .map(|doc| {
            let mut cols: Vec<usize> = doc.iter().filter_map(|t| vocab.get(t)).collect();
            cols.sort_unstable();
            let mut row: Vec<(usize, u32)> = Vec::new();
            for c in cols {
                match row.last_mut() {
                    Some((last, n)) if *last == c => *n += 1,
                    _ => row.push((c, 1)),
                }
            }
            row
        })
        .collect();
    CsrMatrix::from_sorted_rows(vocab.len(), rows)
}

/// `term<TAB>doc_freq<TAB>idf` per line, idf in shortest round-trip form.
pub fn write_vocabulary<F: Scalar, W: Write>(
    mut w: W,
    vocab: &Vocabulary,
    tfidf: &TfidfModel<F>,
) -> io::Result<()> {
    for ((term, df), idf) in vocab.terms.iter().zip(&vocab.doc_freq).zip(tfidf.idf()) {
        writeln!(w, "{term}\t{df}\t{idf}")?;
    }
    w.flush()
}
