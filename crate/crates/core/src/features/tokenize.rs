use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tokens are maximal runs of Unicode letters/digits with at least this many chars.
pub const MIN_TOKEN_CHARS: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub ngram_min: usize,
    pub ngram_max: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            ngram_min: 1,
            ngram_max: 2,
        }
    }
}

impl TokenizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ngram_min == 0 || self.ngram_min > self.ngram_max {
            return Err(Error::Config(format!(
                "need 1 <= ngram_min <= ngram_max, got {}..{}",
                self.ngram_min, self.ngram_max
            )));
        }
        Ok(())
    }
}

/// Unicode simple case folding, one char to one char.
pub fn fold_case(text: &str) -> String {
    text.chars()
        .map(|c| {
            unicode_case_mapping::case_folded(c)
                .and_then(|cp| char::from_u32(cp.get()))
                .unwrap_or(c)
        })
        .collect()
}

fn words(text: &str) -> Vec<&str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| w.chars().nth(MIN_TOKEN_CHARS - 1).is_some())
        .collect()
}

/// All n-grams for n in `ngram_min..=ngram_max`, grouped by n and in reading
/// order within each n. Multi-word terms are joined by a single space.
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    let folded;
    let text = if cfg.lowercase {
        folded = fold_case(text);
        folded.as_str()
    } else {
        text
    };
    let tokens = words(text);
    let mut out = Vec::new();
    for n in cfg.ngram_min..=cfg.ngram_max {
        if n == 1 {
            out.extend(tokens.iter().map(|t| t.to_string()));
        } else {
            out.extend(tokens.windows(n).map(|w| w.join(" ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unigrams_then_bigrams() {
        let cfg = TokenizerConfig::default();
        assert_eq!(
            tokenize("Die Katze schläft.", &cfg),
            ["die", "katze", "schläft", "die katze", "katze schläft"]
        );
        assert!(tokenize("", &cfg).is_empty());
        assert_eq!(tokenize("A1 b2", &cfg), ["a1", "b2", "a1 b2"]);
    }

    #[test]
    fn single_chars_and_punctuation_dropped() {
        let cfg = TokenizerConfig::default();
        assert_eq!(tokenize("a, bb - c dd!", &cfg), ["bb", "dd", "bb dd"]);
    }

    #[test]
    fn case_folding() {
        let cfg = TokenizerConfig::default();
        assert_eq!(tokenize("STRAẞE Öl", &cfg), ["straße", "öl", "straße öl"]);
        let keep = TokenizerConfig {
            lowercase: false,
            ..cfg
        };
        assert_eq!(tokenize("Öl", &keep), ["Öl"]);
    }

    #[test]
    fn ngram_bounds() {
        let cfg = TokenizerConfig {
            lowercase: true,
            ngram_min: 2,
            ngram_max: 3,
        };
        assert_eq!(tokenize("aa bb cc", &cfg), ["aa bb", "bb cc", "aa bb cc"]);
        assert!(TokenizerConfig {
            ngram_min: 0,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(TokenizerConfig {
            ngram_min: 3,
            ngram_max: 2,
            ..cfg
        }
        .validate()
        .is_err());
    }

    proptest! {
        #[test]
        fn folding_is_idempotent(s in "\\PC{0,60}") {
            let cfg = TokenizerConfig::default();
            prop_assert_eq!(tokenize(&fold_case(&s), &cfg), tokenize(&s, &cfg));
        }

        #[test]
        fn unigram_count_matches_bigram_count(s in "[a-zA-Zäöü0-9 ,.]{0,80}") {
            let cfg = TokenizerConfig::default();
            let terms = tokenize(&s, &cfg);
            let uni = terms.iter().filter(|t| !t.contains(' ')).count();
            let bi = terms.len() - uni;
            prop_assert_eq!(bi, uni.saturating_sub(1));
        }
    }
}
