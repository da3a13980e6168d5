//! Article data model, JSONL ingestion, cleaning and deterministic partitions.

mod article;
mod clean;
mod split;
mod stats;

pub use article::{load_corpus, parse_corpus, write_corpus, Article, LabelField, LoadedCorpus};
pub use clean::{
    clean_article, clean_article_detailed, clean_corpus, load_patterns, normalize_date,
    parse_patterns, CleanOutcome, CleanSummary, CleaningConfig, StripPattern,
};
pub use split::{make_folds, make_partition, partitions, Partition, SplitKind, SplitSpec};
pub use stats::{corpus_stats, CorpusStats, LengthBin};

use crate::hashing::{hex64, Fingerprint};

/// Content fingerprint of a set of articles, independent of input order.
pub fn corpus_fingerprint<'a>(articles: impl IntoIterator<Item = &'a Article>) -> String {
    let mut sorted: Vec<&Article> = articles.into_iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut fp = Fingerprint::new();
    for a in sorted {
        fp.str(&a.id)
            .str(&a.url)
            .str(&a.title)
            .str(&a.body)
            .str(&a.category)
            .str(&a.date)
            .str(&a.publisher)
            .u64(a.satire as u64)
            .u64(match a.paid {
                None => 2,
                Some(p) => p as u64,
            });
    }
    hex64(fp.finish())
}
