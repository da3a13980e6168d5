//! Seeded synthetic corpora with planted class and publisher markers.
//!
//! Every body is background text drawn from a Zipf-like distribution over
//! pseudo-words, plus a few marker words that identify the article's class and
//! its publisher. Whether the satire markers are shared by all publishers or
//! private to each one controls how well a model transfers to unseen publishers.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Article;
use crate::error::{Error, Result};

const SYLLABLES: [&str; 16] = [
    "ba", "ko", "mi", "tu", "le", "ra", "so", "ne", "vi", "du", "pa", "go", "ze", "fi", "ju", "ho",
];

/// Whether class markers are shared by all publishers or private to each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerScope {
    Shared,
    PerPublisher,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_docs: usize,
    pub n_publishers: usize,
    pub satire_fraction: f64,
    pub scope: MarkerScope,
    /// Size of each marker pool.
    pub markers_per_pool: usize,
    /// Class markers placed in each body.
    pub class_markers_per_doc: usize,
    /// Publisher markers placed in each body.
    pub publisher_markers_per_doc: usize,
    pub background_vocab: usize,
    pub min_body_chars: usize,
    /// Publisher (by index) whose articles carry a paid flag.
    pub paid_publisher: Option<usize>,
    pub paid_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_docs: 4000,
            n_publishers: 4,
            satire_fraction: 0.3,
            scope: MarkerScope::PerPublisher,
            markers_per_pool: 8,
            class_markers_per_doc: 4,
            publisher_markers_per_doc: 3,
            background_vocab: 2000,
            min_body_chars: 520,
            paid_publisher: None,
            paid_fraction: 0.3,
            seed: 7,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let frac = |x: f64| (0.0..=1.0).contains(&x);
        if self.n_docs == 0 || self.n_publishers == 0 || self.background_vocab == 0 {
            return Err(Error::Config(
                "synthetic corpus needs documents, publishers and vocabulary".into(),
            ));
        }
        if !frac(self.satire_fraction) || !frac(self.paid_fraction) {
            return Err(Error::Config(
                "synthetic fractions must lie in [0, 1]".into(),
            ));
        }
        if self.class_markers_per_doc > self.markers_per_pool
            || self.publisher_markers_per_doc > self.markers_per_pool
        {
            return Err(Error::Config(
                "more markers per document than the pool holds".into(),
            ));
        }
        if matches!(self.paid_publisher, Some(p) if p >= self.n_publishers) {
            return Err(Error::Config("paid publisher index out of range".into()));
        }
        Ok(())
    }

    pub fn publisher_name(&self, p: usize) -> String {
        publisher_name(p)
    }
}

pub fn publisher_name(p: usize) -> String {
    format!("publisher{p:02}")
}

/// Bijective base-16 syllable spelling of `n` with exactly `len` syllables.
fn pseudo_word(mut n: usize, len: usize) -> String {
    let mut out = String::with_capacity(2 * len);
    for _ in 0..len {
        out.push_str(SYLLABLES[n % SYLLABLES.len()]);
        n /= SYLLABLES.len();
    }
    out
}

/// Marker pool `pool`: four-syllable words, never colliding with the
/// three-syllable background words.
fn marker_pool(pool: usize, size: usize) -> Vec<String> {
    (0..size).map(|k| pseudo_word(pool * size + k, 4)).collect()
}

struct Pools {
    satire: Vec<Vec<String>>,
    regular: Vec<Vec<String>>,
    paid: Vec<String>,
    publisher: Vec<Vec<String>>,
}

impl Pools {
    fn new(cfg: &SynthConfig) -> Self {
        let m = cfg.markers_per_pool;
        let mut next = 0;
        let mut take = || {
            next += 1;
            marker_pool(next - 1, m)
        };
        let class_pools = match cfg.scope {
            MarkerScope::Shared => 1,
            MarkerScope::PerPublisher => cfg.n_publishers,
        };
        let satire = (0..class_pools).map(|_| take()).collect();
        let regular = (0..class_pools).map(|_| take()).collect();
        let paid = take();
        let publisher = (0..cfg.n_publishers).map(|_| take()).collect();
        Pools {
            satire,
            regular,
            paid,
            publisher,
        }
    }

    fn class_pool(&self, satire: bool, publisher: usize) -> &[String] {
        let pools = if satire { &self.satire } else { &self.regular };
        &pools[publisher.min(pools.len() - 1)]
    }
}

/// Generates `cfg.n_docs` articles, publishers assigned round-robin.
pub fn generate(cfg: &SynthConfig) -> Result<Vec<Article>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let background: Vec<String> = (0..cfg.background_vocab)
        .map(|k| pseudo_word(k, 3))
        .collect();
    let zipf = WeightedIndex::new((1..=cfg.background_vocab).map(|r| 1.0 / r as f64))
        .expect("positive weights");
    let pools = Pools::new(cfg);
    let mut out = Vec::with_capacity(cfg.n_docs);
    for i in 0..cfg.n_docs {
        let p = i % cfg.n_publishers;
        let satire = rng.gen_bool(cfg.satire_fraction);
        let paid = (cfg.paid_publisher == Some(p)).then(|| rng.gen_bool(cfg.paid_fraction));
        let mut markers: Vec<&String> = Vec::new();
        markers.extend(
            pools
                .class_pool(satire, p)
                .choose_multiple(&mut rng, cfg.class_markers_per_doc),
        );
        markers.extend(pools.publisher[p].choose_multiple(&mut rng, cfg.publisher_markers_per_doc));
        if paid == Some(true) {
            markers.extend(
                pools
                    .paid
                    .choose_multiple(&mut rng, cfg.class_markers_per_doc),
            );
        }
        let mut words: Vec<&str> = markers.iter().map(|s| s.as_str()).collect();
        let mut len: usize = words.iter().map(|w| w.len() + 1).sum();
        while len < cfg.min_body_chars {
            let w = background[zipf.sample(&mut rng)].as_str();
            len += w.len() + 1;
            words.push(w);
        }
        words.shuffle(&mut rng);
        let title: Vec<&str> = (0..5)
            .map(|_| background[zipf.sample(&mut rng)].as_str())
            .collect();
        let publisher = publisher_name(p);
        out.push(Article {
            id: format!("syn-{i:05}"),
            url: format!("https://{publisher}.example/a/{i}"),
            title: title.join(" "),
            body: words.join(" "),
            category: if satire { "humor" } else { "news" }.to_string(),
            date: format!("2017-{:02}-{:02}", 1 + i % 12, 1 + i % 28),
            publisher,
            satire,
            paid,
        });
    }
    Ok(out)
}
