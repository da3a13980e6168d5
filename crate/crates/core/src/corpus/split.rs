use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Article, LabelField};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::hashing::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    Random,
    StratifiedRandom,
    PublisherHoldout,
    Kfold,
}

impl fmt::Display for SplitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitKind::Random => "random",
            SplitKind::StratifiedRandom => "stratified_random",
            SplitKind::PublisherHoldout => "publisher_holdout",
            SplitKind::Kfold => "kfold",
        })
    }
}

impl FromStr for SplitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(SplitKind::Random),
            "stratified_random" | "stratified" => Ok(SplitKind::StratifiedRandom),
            "publisher_holdout" | "holdout" => Ok(SplitKind::PublisherHoldout),
            "kfold" => Ok(SplitKind::Kfold),
            _ => Err(Error::Config(format!("unknown split kind {s:?}"))),
        }
    }
}

/// How to partition a corpus. Only the fields relevant to `kind` are set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub kind: SplitKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub test_fraction: Option<Fraction>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub holdout_publishers: Option<BTreeSet<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub folds: Option<usize>,
    pub label_field: LabelField,
}

impl SplitSpec {
    pub fn random(test_fraction: Fraction, seed: u64, label_field: LabelField) -> Self {
        SplitSpec {
            kind: SplitKind::Random,
            test_fraction: Some(test_fraction),
            seed,
            holdout_publishers: None,
            folds: None,
            label_field,
        }
    }

    pub fn stratified(test_fraction: Fraction, seed: u64, label_field: LabelField) -> Self {
        SplitSpec {
            kind: SplitKind::StratifiedRandom,
            ..SplitSpec::random(test_fraction, seed, label_field)
        }
    }

    pub fn publisher_holdout<I, S>(publishers: I, seed: u64, label_field: LabelField) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SplitSpec {
            kind: SplitKind::PublisherHoldout,
            test_fraction: None,
            seed,
            holdout_publishers: Some(publishers.into_iter().map(Into::into).collect()),
            folds: None,
            label_field,
        }
    }

    pub fn kfold(folds: usize, seed: u64, label_field: LabelField) -> Self {
        SplitSpec {
            kind: SplitKind::Kfold,
            test_fraction: None,
            seed,
            holdout_publishers: None,
            folds: Some(folds),
            label_field,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Split(format!("{} split: {m}", self.kind)));
        match self.kind {
            SplitKind::Random | SplitKind::StratifiedRandom => {
                match self.test_fraction {
                    Some(f) if f.is_proper() => {}
                    Some(_) => return bad("test_fraction must lie strictly between 0 and 1"),
                    None => return bad("test_fraction is required"),
                }
                if self.holdout_publishers.is_some() || self.folds.is_some() {
                    return bad("only test_fraction and seed apply");
                }
            }
            SplitKind::PublisherHoldout => {
                match &self.holdout_publishers {
                    Some(p) if !p.is_empty() => {}
                    _ => return bad("holdout_publishers must be nonempty"),
                }
                if self.test_fraction.is_some() || self.folds.is_some() {
                    return bad("only holdout_publishers applies");
                }
            }
            SplitKind::Kfold => {
                match self.folds {
                    Some(k) if k >= 2 => {}
                    _ => return bad("folds must be at least 2"),
                }
                if self.test_fraction.is_some() || self.holdout_publishers.is_some() {
                    return bad("only folds and seed apply");
                }
            }
        }
        Ok(())
    }
}

/// Train/test id lists, each sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub spec: SplitSpec,
}

fn sorted_ids(corpus: &[Article]) -> Vec<&str> {
    let mut ids: Vec<&str> = corpus.iter().map(|a| a.id.as_str()).collect();
    ids.sort_unstable();
    ids
}

fn fisher_yates<T>(items: &mut [T], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Ids grouped by class label, classes in lexicographic order, ids sorted.
fn ids_by_class(corpus: &[Article], field: LabelField) -> Result<BTreeMap<String, Vec<&str>>> {
    let mut groups: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    for a in corpus {
        groups
            .entry(a.label_or_err(field)?)
            .or_default()
            .push(&a.id);
    }
    for ids in groups.values_mut() {
        ids.sort_unstable();
    }
    Ok(groups)
}

fn finish(mut train: Vec<String>, mut test: Vec<String>, spec: &SplitSpec) -> Result<Partition> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::Split(format!(
            "{} split leaves {} training and {} test documents",
            spec.kind,
            train.len(),
            test.len()
        )));
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Partition {
        train_ids: train,
        test_ids: test,
        spec: spec.clone(),
    })
}

/// Splits per-class test quotas by largest remainder so each class is within one
/// document of its exact proportional share and the quotas sum to `test_size`.
fn class_quotas(class_sizes: &[usize], total: usize, test_size: usize) -> Vec<usize> {
    let mut quotas: Vec<usize> = class_sizes.iter().map(|&n| n * test_size / total).collect();
    let remainders: Vec<usize> = class_sizes.iter().map(|&n| n * test_size % total).collect();
    let mut order: Vec<usize> = (0..class_sizes.len()).collect();
    order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]).then(a.cmp(&b)));
    let missing = test_size - quotas.iter().sum::<usize>();
    for &c in order.iter().take(missing) {
        quotas[c] += 1;
    }
    quotas
}

/// Builds a single train/test partition (`random`, `stratified_random`,
/// `publisher_holdout`). Use [`make_folds`] for `kfold`.
///
/// Random kinds shuffle the lexicographically sorted id list with a seeded
/// Fisher–Yates pass and take the first `round(N × test_fraction)` ids (half away
/// from zero) as the test set.
pub fn make_partition(corpus: &[Article], spec: &SplitSpec) -> Result<Partition> {
    spec.validate()?;
    if corpus.is_empty() {
        return Err(Error::Split("empty corpus".into()));
    }
    match spec.kind {
        SplitKind::Random => {
            let mut ids = sorted_ids(corpus);
            let test_size = spec.test_fraction.unwrap().mul_round(ids.len());
            fisher_yates(&mut ids, spec.seed);
            let test = ids[..test_size].iter().map(|s| s.to_string()).collect();
            let train = ids[test_size..].iter().map(|s| s.to_string()).collect();
            finish(train, test, spec)
        }
        SplitKind::StratifiedRandom => {
            let groups = ids_by_class(corpus, spec.label_field)?;
            let test_size = spec.test_fraction.unwrap().mul_round(corpus.len());
            let sizes: Vec<usize> = groups.values().map(Vec::len).collect();
            let quotas = class_quotas(&sizes, corpus.len(), test_size);
            let (mut train, mut test) = (Vec::new(), Vec::new());
            for (c, (ids, quota)) in groups.into_values().zip(quotas).enumerate() {
                let mut ids = ids;
                fisher_yates(&mut ids, derive_seed(spec.seed, "stratified", &[c as u64]));
                test.extend(ids[..quota].iter().map(|s| s.to_string()));
                train.extend(ids[quota..].iter().map(|s| s.to_string()));
            }
            finish(train, test, spec)
        }
        SplitKind::PublisherHoldout => {
            let held = spec.holdout_publishers.as_ref().unwrap();
            let present: BTreeSet<&str> = corpus.iter().map(|a| a.publisher.as_str()).collect();
            if let Some(missing) = held.iter().find(|p| !present.contains(p.as_str())) {
                return Err(Error::Split(format!(
                    "holdout publisher {missing:?} does not occur in the corpus"
                )));
            }
            let (test, train): (Vec<&Article>, Vec<&Article>) =
                corpus.iter().partition(|a| held.contains(&a.publisher));
            finish(
                train.into_iter().map(|a| a.id.clone()).collect(),
                test.into_iter().map(|a| a.id.clone()).collect(),
                spec,
            )
        }
        SplitKind::Kfold => Err(Error::Split(
            "kfold produces several partitions; use make_folds".into(),
        )),
    }
}

/// Stratified k-fold: each class's ids are shuffled, then dealt round-robin over
/// the folds with the dealing position carried across classes, so fold sizes
/// differ by at most one and every class is spread evenly.
pub fn make_folds(corpus: &[Article], spec: &SplitSpec) -> Result<Vec<Partition>> {
    spec.validate()?;
    if spec.kind != SplitKind::Kfold {
        return Err(Error::Split(format!("{} is not a kfold spec", spec.kind)));
    }
    let k = spec.folds.unwrap();
    if corpus.len() < k {
        return Err(Error::Split(format!(
            "{} documents cannot fill {k} folds",
            corpus.len()
        )));
    }
    let groups = ids_by_class(corpus, spec.label_field)?;
    let mut assignment: Vec<Vec<&str>> = vec![Vec::new(); k];
    let mut position = 0usize;
    for (c, mut ids) in groups.into_values().enumerate() {
        fisher_yates(&mut ids, derive_seed(spec.seed, "kfold", &[c as u64]));
        for id in ids {
            assignment[position % k].push(id);
            position += 1;
        }
    }
    (0..k)
        .map(|f| {
            let test = assignment[f].iter().map(|s| s.to_string()).collect();
            let train = assignment
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, ids)| ids.iter().map(|s| s.to_string()))
                .collect();
            finish(train, test, spec)
        })
        .collect()
}

/// Dispatches on the split kind: one partition, or `folds` partitions for kfold.
pub fn partitions(corpus: &[Article], spec: &SplitSpec) -> Result<Vec<Partition>> {
    match spec.kind {
        SplitKind::Kfold => make_folds(corpus, spec),
        _ => make_partition(corpus, spec).map(|p| vec![p]),
    }
}
