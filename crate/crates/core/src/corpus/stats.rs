use std::collections::BTreeMap;

use serde::Serialize;

use super::Article;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthBin {
    /// inclusive lower bound in characters
    pub lo: usize,
    /// exclusive upper bound; `None` for the overflow bin
    pub hi: Option<usize>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub total: usize,
    pub satire: usize,
    pub regular: usize,
    pub paid: usize,
    pub editorial: usize,
    pub paid_unknown: usize,
    pub per_publisher: BTreeMap<String, usize>,
    pub body_length_histogram: Vec<LengthBin>,
}

const BIN_WIDTH: usize = 500;
const BINS: usize = 20;

pub fn corpus_stats(corpus: &[Article]) -> CorpusStats {
    let mut per_publisher = BTreeMap::new();
    let mut hist = vec![0usize; BINS + 1];
    let (mut satire, mut paid, mut editorial) = (0, 0, 0);
    for a in corpus {
        *per_publisher.entry(a.publisher.clone()).or_insert(0) += 1;
        satire += a.satire as usize;
        match a.paid {
            Some(true) => paid += 1,
            Some(false) => editorial += 1,
            None => {}
        }
        hist[(a.body.chars().count() / BIN_WIDTH).min(BINS)] += 1;
    }
    let body_length_histogram = hist
        .into_iter()
        .enumerate()
        .map(|(i, count)| LengthBin {
            lo: i * BIN_WIDTH,
            hi: (i < BINS).then_some((i + 1) * BIN_WIDTH),
            count,
        })
        .collect();
    CorpusStats {
        total: corpus.len(),
        satire,
        regular: corpus.len() - satire,
        paid,
        editorial,
        paid_unknown: corpus.len() - paid - editorial,
        per_publisher,
        body_length_histogram,
    }
}
