use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;

use super::{Article, LoadedCorpus};
use crate::error::{Error, Result};

/// A boilerplate pattern removed from titles and bodies.
#[derive(Clone, Debug)]
pub enum StripPattern {
    Literal(String),
    Regex(Regex),
}

impl StripPattern {
    /// `re:<expr>` is a regular expression, anything else a literal.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.strip_prefix("re:") {
            Some(expr) => Regex::new(expr)
                .map(StripPattern::Regex)
                .map_err(|e| Error::Pattern {
                    pattern: spec.to_string(),
                    message: e.to_string(),
                }),
            None if spec.is_empty() => Err(Error::Pattern {
                pattern: spec.to_string(),
                message: "empty literal".into(),
            }),
            None => Ok(StripPattern::Literal(spec.to_string())),
        }
    }

    fn remove(&self, text: &str) -> String {
        match self {
            StripPattern::Literal(lit) => text.replace(lit.as_str(), ""),
            StripPattern::Regex(re) => re.replace_all(text, "").into_owned(),
        }
    }
}

/// Parses a patterns file: one pattern per line, `#` lines and blank lines ignored.
pub fn parse_patterns(text: &str) -> Result<Vec<StripPattern>> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(StripPattern::parse)
        .collect()
}

pub fn load_patterns(path: impl AsRef<Path>) -> Result<Vec<StripPattern>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_patterns(&text)
}

#[derive(Clone, Debug)]
pub struct CleaningConfig {
    pub min_body_chars: usize,
    pub max_body_chars: usize,
    pub strip_patterns: Vec<StripPattern>,
    /// chrono format strings tried after the ISO-8601 forms.
    pub date_formats: Vec<String>,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig {
            min_body_chars: 500,
            max_body_chars: 10_000,
            strip_patterns: Vec::new(),
            date_formats: vec![
                "%d.%m.%Y".into(),
                "%d.%m.%Y %H:%M".into(),
                "%d.%m.%Y %H:%M:%S".into(),
            ],
        }
    }
}

impl CleaningConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_body_chars == 0 || self.min_body_chars > self.max_body_chars {
            return Err(Error::Config(format!(
                "need 0 < min_body_chars <= max_body_chars, got {} and {}",
                self.min_body_chars, self.max_body_chars
            )));
        }
        Ok(())
    }

    /// Applies every pattern in order, repeating until nothing changes so that
    /// removals which expose a new match are also stripped.
    fn strip(&self, text: &str) -> String {
        let mut current = text.to_string();
        loop {
            let mut next = current.clone();
            for p in &self.strip_patterns {
                next = p.remove(&next);
            }
            if next == current {
                return current;
            }
            current = next;
        }
    }
}

fn parse_with(raw: &str, format: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(raw, format).ok().or_else(|| {
        NaiveDateTime::parse_from_str(raw, format)
            .ok()
            .map(|dt| dt.date())
    })
}

/// Normalizes a publication date to `YYYY-MM-DD`.
///
/// ISO-8601 dates and date-times are accepted first. Otherwise every configured
/// format is tried; the date is rejected when none parses or when two formats
/// yield different calendar dates.
pub fn normalize_date(raw: &str, formats: &[String]) -> Result<String> {
    let s = raw.trim();
    let iso = NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .or_else(|| DateTime::parse_from_rfc3339(s).ok().map(|d| d.date_naive()))
        .or_else(|| parse_with(s, "%Y-%m-%dT%H:%M:%S"))
        .or_else(|| parse_with(s, "%Y-%m-%dT%H:%M:%S%.f"))
        .or_else(|| parse_with(s, "%Y-%m-%d %H:%M:%S"));
    if let Some(d) = iso {
        return Ok(d.format("%Y-%m-%d").to_string());
    }
    let found: BTreeSet<NaiveDate> = formats.iter().filter_map(|f| parse_with(s, f)).collect();
    match found.len() {
        0 => Err(Error::Date {
            raw: raw.to_string(),
        }),
        1 => Ok(found.first().unwrap().format("%Y-%m-%d").to_string()),
        _ => Err(Error::AmbiguousDate {
            raw: raw.to_string(),
            candidates: found
                .iter()
                .map(|d| d.format("%Y-%m-%d").to_string())
                .collect::<Vec<_>>()
                .join(", "),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CleanOutcome {
    Kept(Article),
    TooShort { chars: usize },
    TooLong { chars: usize },
}

/// Strips patterns, normalizes the date and applies the body length window.
/// Length is counted in Unicode scalar values after stripping.
pub fn clean_article_detailed(a: &Article, cfg: &CleaningConfig) -> Result<CleanOutcome> {
    let date = normalize_date(&a.date, &cfg.date_formats)?;
    let body = cfg.strip(&a.body);
    let chars = body.chars().count();
    if chars < cfg.min_body_chars {
        return Ok(CleanOutcome::TooShort { chars });
    }
    if chars > cfg.max_body_chars {
        return Ok(CleanOutcome::TooLong { chars });
    }
    Ok(CleanOutcome::Kept(Article {
        title: cfg.strip(&a.title),
        body,
        date,
        ..a.clone()
    }))
}

pub fn clean_article(a: &Article, cfg: &CleaningConfig) -> Result<Option<Article>> {
    Ok(match clean_article_detailed(a, cfg)? {
        CleanOutcome::Kept(a) => Some(a),
        _ => None,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CleanSummary {
    pub input: usize,
    pub kept: usize,
    pub dropped_short: usize,
    pub dropped_long: usize,
}

/// Cleans a loaded corpus in parallel, keeping input order. The first date
/// failure aborts with the source line number.
pub fn clean_corpus(
    loaded: &LoadedCorpus,
    cfg: &CleaningConfig,
) -> Result<(Vec<Article>, CleanSummary)> {
    cfg.validate()?;
    let outcomes: Vec<Result<CleanOutcome>> = loaded
        .articles
        .par_iter()
        .map(|a| clean_article_detailed(a, cfg))
        .collect();
    let mut kept = Vec::new();
    let mut summary = CleanSummary {
        input: loaded.articles.len(),
        ..Default::default()
    };
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let line = loaded.lines.get(i).copied().unwrap_or(i + 1);
        match outcome.map_err(|e| Error::Record {
            line,
            message: e.to_string(),
        })? {
            CleanOutcome::Kept(a) => kept.push(a),
            CleanOutcome::TooShort { .. } => summary.dropped_short += 1,
            CleanOutcome::TooLong { .. } => summary.dropped_long += 1,
        }
    }
    summary.kept = kept.len();
    Ok((kept, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn article(body: &str) -> Article {
        Article {
            id: "1".into(),
            url: "https://example.org".into(),
            title: "Titel".into(),
            body: body.into(),
            category: "c".into(),
            date: "2018-03-04".into(),
            publisher: "p".into(),
            satire: false,
            paid: None,
        }
    }

    #[test]
    fn short_body_rejected() {
        let a = article(&"x".repeat(400));
        assert_eq!(clean_article(&a, &CleaningConfig::default()).unwrap(), None);
    }

    #[test]
    fn boundary_bodies_kept_unchanged() {
        let cfg = CleaningConfig::default();
        let a = article(&"ä".repeat(500));
        assert_eq!(clean_article(&a, &cfg).unwrap(), Some(a.clone()));
        let b = article(&"y".repeat(10_000));
        assert_eq!(clean_article(&b, &cfg).unwrap(), Some(b.clone()));
        let c = article(&"y".repeat(10_001));
        assert_eq!(
            clean_article_detailed(&c, &cfg).unwrap(),
            CleanOutcome::TooLong { chars: 10_001 }
        );
    }

    #[test]
    fn marker_removed() {
        let text = "t".repeat(520);
        let cfg = CleaningConfig {
            strip_patterns: parse_patterns("# publisher marks\nIMPRESSUM: Verlag X\n").unwrap(),
            ..Default::default()
        };
        let a = article(&format!("IMPRESSUM: Verlag X\n{text}"));
        let cleaned = clean_article(&a, &cfg).unwrap().unwrap();
        assert_eq!(cleaned.body, format!("\n{text}"));
    }

    #[test]
    fn stripping_happens_before_length_check() {
        let cfg = CleaningConfig {
            strip_patterns: vec![StripPattern::parse("re:Footer [0-9]+").unwrap()],
            ..Default::default()
        };
        let a = article(&format!("{}Footer 123456789", "k".repeat(490)));
        assert_eq!(
            clean_article_detailed(&a, &cfg).unwrap(),
            CleanOutcome::TooShort { chars: 490 }
        );
    }

    #[test]
    fn nested_literal_is_fully_removed() {
        let cfg = CleaningConfig {
            strip_patterns: vec![StripPattern::parse("AB").unwrap()],
            min_body_chars: 1,
            ..Default::default()
        };
        let a = article("xAABBy");
        let once = clean_article(&a, &cfg).unwrap().unwrap();
        assert_eq!(once.body, "xy");
    }

    #[test]
    fn dates() {
        let f = CleaningConfig::default().date_formats;
        assert_eq!(normalize_date("2018-03-04", &f).unwrap(), "2018-03-04");
        assert_eq!(
            normalize_date("2018-03-04T10:00:00+01:00", &f).unwrap(),
            "2018-03-04"
        );
        assert_eq!(normalize_date("04.03.2018", &f).unwrap(), "2018-03-04");
        assert_eq!(
            normalize_date("04.03.2018 12:30", &f).unwrap(),
            "2018-03-04"
        );
        assert!(matches!(
            normalize_date("gestern", &f),
            Err(Error::Date { .. })
        ));
        let amb = vec!["%d/%m/%Y".to_string(), "%m/%d/%Y".to_string()];
        assert!(matches!(
            normalize_date("03/04/2018", &amb),
            Err(Error::AmbiguousDate { .. })
        ));
        // both orders agree when day == month
        assert_eq!(normalize_date("04/04/2018", &amb).unwrap(), "2018-04-04");
    }

    #[test]
    fn unparseable_date_carries_raw_string() {
        let mut a = article(&"x".repeat(600));
        a.date = "31.02.2018".into();
        let err = clean_article(&a, &CleaningConfig::default()).unwrap_err();
        assert!(err.to_string().contains("31.02.2018"));
    }

    #[test]
    fn invalid_bounds() {
        let cfg = CleaningConfig {
            min_body_chars: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = CleaningConfig {
            min_body_chars: 10,
            max_body_chars: 5,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn corpus_summary_counts_drops() {
        let mut articles = Vec::new();
        for i in 0..10 {
            let mut a = article(&"z".repeat(if i < 2 { 100 } else { 700 }));
            a.id = i.to_string();
            articles.push(a);
        }
        let loaded = LoadedCorpus {
            lines: (1..=10).collect(),
            articles,
            errors: vec![],
        };
        let (kept, summary) = clean_corpus(&loaded, &CleaningConfig::default()).unwrap();
        assert_eq!(kept.len(), 8);
        assert_eq!(summary.dropped_short, 2);
        assert_eq!(summary.dropped_long, 0);
    }

    proptest! {
        #[test]
        fn cleaning_is_idempotent(
            body in "(IMP|RESSUM|IMPRESSUM|[a-zäöü ]{1,20}){10,80}",
            title in "[A-Za-z ]{0,20}(IMPRESSUM)?",
        ) {
            let cfg = CleaningConfig {
                min_body_chars: 20,
                strip_patterns: vec![
                    StripPattern::parse("IMPRESSUM").unwrap(),
                    StripPattern::parse("re:\\s{3,}").unwrap(),
                ],
                ..Default::default()
            };
            let mut a = article(&body);
            a.title = title;
            a.date = "01.02.2017".into();
            if let Some(once) = clean_article(&a, &cfg).unwrap() {
                let twice = clean_article(&once, &cfg).unwrap();
                prop_assert_eq!(twice, Some(once));
            }
        }
    }
}
