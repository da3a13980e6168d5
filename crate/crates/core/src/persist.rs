//! Versioned, checksummed storage of a fitted pipeline.
//!
//! A bundle file is one header line followed by a JSON body:
//!
//! ```text
//! NEWSCLF-BUNDLE v1 <fnv1a64 of body, 16 hex digits>
//! { "format_version": 1, "scalar": "f64", ... }
//! ```
//!
//! Real numbers are stored as strings holding their shortest round-trip decimal
//! form, so a load reproduces every weight bit for bit.

use std::borrow::Borrow;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::features::{FittedPipeline, TfidfModel, TokenizerConfig, VocabParams, Vocabulary};
use crate::fraction::Fraction;
use crate::hashing::{fnv1a64, hex64};
use crate::linear::{decision_scores, predict, LinearModel, ModelKind, SolverConfig};
use crate::scalar::Scalar;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "NEWSCLF-BUNDLE";

/// Everything `predict` needs: tokenizer, vocabulary, idf weights and classifier.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelBundle<F> {
    pub pipeline: FittedPipeline<F>,
    pub model: LinearModel<F>,
    pub corpus_fingerprint: String,
}

impl<F: Scalar> ModelBundle<F> {
    pub fn validate(&self) -> Result<()> {
        let v = self.pipeline.vocab.len();
        let idf = self.pipeline.tfidf.idf().len();
        if idf != v {
            return Err(Error::InconsistentBundle(format!(
                "{idf} idf weights for {v} vocabulary terms"
            )));
        }
        self.model.validate()?;
        if self.model.n_features() != v {
            return Err(Error::InconsistentBundle(format!(
                "weight vectors have {} entries for {v} vocabulary terms",
                self.model.n_features()
            )));
        }
        Ok(())
    }

    pub fn scores<A: Borrow<Article>>(&self, articles: &[A]) -> Result<Vec<Vec<F>>> {
        decision_scores(&self.model, &self.pipeline.transform(articles)?)
    }

    /// Predicted class names.
    pub fn predict<A: Borrow<Article>>(&self, articles: &[A]) -> Result<Vec<String>> {
        let x = self.pipeline.transform(articles)?;
        Ok(predict(&self.model, &x)?
            .into_iter()
            .map(|k| self.model.classes[k].clone())
            .collect())
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigWire {
    c: String,
    tol: String,
    max_iter: usize,
    fit_bias: bool,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct VocabWire {
    n_docs: usize,
    max_df_ratio: Fraction,
    min_df_count: u64,
    terms: Vec<String>,
    doc_freq: Vec<u64>,
    idf: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ModelWire {
    kind: ModelKind,
    classes: Vec<String>,
    weights: Vec<Vec<String>>,
    bias: Vec<String>,
    config: ConfigWire,
    vocab_fingerprint: String,
    converged: bool,
}

#[derive(Serialize, Deserialize)]
struct BundleWire {
    format_version: u32,
    scalar: String,
    tokenizer: TokenizerConfig,
    vocabulary: VocabWire,
    model: ModelWire,
    corpus_fingerprint: String,
}

fn reals<F: Scalar>(v: &[F]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn parse_real<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Bundle(format!("not a real number: {s:?}")))
}

fn parse_reals<F: Scalar>(v: &[String]) -> Result<Vec<F>> {
    v.iter().map(|s| parse_real(s)).collect()
}

/// Serializes a bundle to its file bytes (header + body).
pub fn encode_bundle<F: Scalar>(b: &ModelBundle<F>) -> Result<Vec<u8>> {
    b.validate()?;
    let vocab = &b.pipeline.vocab;
    let m = &b.model;
    let wire = BundleWire {
        format_version: FORMAT_VERSION,
        scalar: F::NAME.to_string(),
        tokenizer: b.pipeline.tokenizer.clone(),
        vocabulary: VocabWire {
            n_docs: vocab.n_docs(),
            max_df_ratio: vocab.params().max_df_ratio,
            min_df_count: vocab.params().min_df_count,
            terms: vocab.terms().to_vec(),
            doc_freq: vocab.doc_freq().to_vec(),
            idf: reals(b.pipeline.tfidf.idf()),
        },
        model: ModelWire {
            kind: m.kind,
            classes: m.classes.clone(),
            weights: m.weights.iter().map(|w| reals(w)).collect(),
            bias: reals(&m.bias),
            config: ConfigWire {
                c: m.config.c.to_string(),
                tol: m.config.tol.to_string(),
                max_iter: m.config.max_iter,
                fit_bias: m.config.fit_bias,
                seed: m.config.seed,
            },
            vocab_fingerprint: m.vocab_fingerprint.clone(),
            converged: m.converged,
        },
        corpus_fingerprint: b.corpus_fingerprint.clone(),
    };
    let mut body = serde_json::to_vec_pretty(&wire)?;
    body.push(b'\n');
    let mut out = format!("{MAGIC} v{FORMAT_VERSION} {}\n", hex64(fnv1a64(&body))).into_bytes();
    out.extend_from_slice(&body);
    Ok(out)
}

/// Parses and verifies bundle file bytes.
pub fn decode_bundle<F: Scalar>(bytes: &[u8]) -> Result<ModelBundle<F>> {
    let newline = bytes
        .iter()
        .position(|&c| c == b'\n')
        .ok_or_else(|| Error::Bundle("truncated: no header line".into()))?;
    let header = std::str::from_utf8(&bytes[..newline])
        .map_err(|_| Error::Bundle("header is not UTF-8".into()))?;
    let body = &bytes[newline + 1..];
    let mut parts = header.split(' ');
    if parts.next() != Some(MAGIC) {
        return Err(Error::Bundle(format!(
            "not a bundle file (header {header:?})"
        )));
    }
    let version: u32 = parts
        .next()
        .and_then(|v| v.strip_prefix('v'))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Bundle(format!("bad version in header {header:?}")))?;
    if version != FORMAT_VERSION {
        return Err(Error::BundleVersion {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let expected = parts
        .next()
        .ok_or_else(|| Error::Bundle("header has no checksum".into()))?;
    let actual = hex64(fnv1a64(body));
    if expected != actual {
        return Err(Error::Checksum {
            expected: expected.to_string(),
            actual,
        });
    }
    let wire: BundleWire = serde_json::from_slice(body)?;
    if wire.format_version != FORMAT_VERSION {
        return Err(Error::BundleVersion {
            found: wire.format_version,
            supported: FORMAT_VERSION,
        });
    }
    if wire.scalar != F::NAME {
        return Err(Error::Bundle(format!(
            "bundle stores {} weights, loader expects {}",
            wire.scalar,
            F::NAME
        )));
    }
    let v = wire.vocabulary;
    let vocab = Vocabulary::from_parts(
        v.terms,
        v.doc_freq,
        v.n_docs,
        VocabParams {
            max_df_ratio: v.max_df_ratio,
            min_df_count: v.min_df_count,
        },
    )?;
    let tfidf = TfidfModel::from_idf(parse_reals(&v.idf)?)?;
    let m = wire.model;
    let model = LinearModel {
        kind: m.kind,
        classes: m.classes,
        weights: m
            .weights
            .iter()
            .map(|w| parse_reals(w))
            .collect::<Result<_>>()?,
        bias: parse_reals(&m.bias)?,
        config: SolverConfig {
            c: parse_real(&m.config.c)?,
            tol: parse_real(&m.config.tol)?,
            max_iter: m.config.max_iter,
            fit_bias: m.config.fit_bias,
            seed: m.config.seed,
        },
        vocab_fingerprint: m.vocab_fingerprint,
        converged: m.converged,
    };
    let bundle = ModelBundle {
        pipeline: FittedPipeline {
            tokenizer: wire.tokenizer,
            vocab,
            tfidf,
        },
        model,
        corpus_fingerprint: wire.corpus_fingerprint,
    };
    bundle.validate()?;
    Ok(bundle)
}

/// Writes the bundle atomically: a sibling temp file is written, then renamed.
pub fn save_bundle<F: Scalar>(b: &ModelBundle<F>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_bundle(b)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn load_bundle<F: Scalar>(path: impl AsRef<Path>) -> Result<ModelBundle<F>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_bundle(&bytes)
}
