use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// One news article. `satire` is the fake/satire target, `paid` marks advertorials
/// where the publisher labels them (unknown elsewhere).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub url: String,
    pub title: String,
    pub body: String,
    pub category: String,
    pub date: String,
    pub publisher: String,
    pub satire: bool,
    pub paid: Option<bool>,
}

/// Which article attribute acts as the class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelField {
    Satire,
    Paid,
    Publisher,
}

impl LabelField {
    /// `(negative, positive)` class names for the binary fields.
    pub fn binary_classes(self) -> Option<(&'static str, &'static str)> {
        match self {
            LabelField::Satire => Some(("regular", "satire")),
            LabelField::Paid => Some(("editorial", "paid")),
            LabelField::Publisher => None,
        }
    }

    pub fn positive_class(self) -> Option<&'static str> {
        self.binary_classes().map(|(_, p)| p)
    }
}

impl fmt::Display for LabelField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelField::Satire => "satire",
            LabelField::Paid => "paid",
            LabelField::Publisher => "publisher",
        })
    }
}

impl FromStr for LabelField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "satire" => Ok(LabelField::Satire),
            "paid" => Ok(LabelField::Paid),
            "publisher" => Ok(LabelField::Publisher),
            _ => Err(Error::Config(format!("unknown label field {s:?}"))),
        }
    }
}

impl Article {
    /// Class label under `field`; `None` when the article carries no paid flag.
    pub fn label(&self, field: LabelField) -> Option<String> {
        match field {
            LabelField::Satire => {
                let (neg, pos) = LabelField::Satire.binary_classes().unwrap();
                Some(if self.satire { pos } else { neg }.to_string())
            }
            LabelField::Paid => {
                let (neg, pos) = LabelField::Paid.binary_classes().unwrap();
                self.paid.map(|p| if p { pos } else { neg }.to_string())
            }
            LabelField::Publisher => Some(self.publisher.clone()),
        }
    }

    pub fn label_or_err(&self, field: LabelField) -> Result<String> {
        self.label(field).ok_or_else(|| Error::MissingLabel {
            id: self.id.clone(),
            field: field.to_string(),
        })
    }

    /// Text fed to the tokenizer: title and body joined by a newline.
    pub fn document_text(&self) -> String {
        let mut s = String::with_capacity(self.title.len() + 1 + self.body.len());
        s.push_str(&self.title);
        s.push('\n');
        s.push_str(&self.body);
        s
    }
}

/// Articles in file order plus the per-record failures.
#[derive(Debug, Default)]
pub struct LoadedCorpus {
    pub articles: Vec<Article>,
    /// 1-based source line of each entry in `articles`.
    pub lines: Vec<usize>,
    pub errors: Vec<Error>,
}

const STRING_FIELDS: [&str; 6] = ["url", "title", "body", "category", "date", "publisher"];

fn take_string(obj: &Map<String, Value>, key: &str, line: usize) -> Result<String> {
    match obj.get(key) {
        None | Some(Value::Null) => Err(Error::MissingField {
            line,
            field: key.to_string(),
        }),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(other) => Err(Error::Record {
            line,
            message: format!("field \"{key}\" must be a string, found {other}"),
        }),
    }
}

fn parse_record(text: &str, line: usize) -> Result<Article> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Record {
        line,
        message: format!("invalid JSON: {e}"),
    })?;
    let Value::Object(obj) = value else {
        return Err(Error::Record {
            line,
            message: "record is not a JSON object".into(),
        });
    };
    let mut fields = Vec::with_capacity(STRING_FIELDS.len());
    for key in STRING_FIELDS {
        fields.push(take_string(&obj, key, line)?);
    }
    let satire = match obj.get("satire") {
        None | Some(Value::Null) => {
            return Err(Error::MissingField {
                line,
                field: "satire".into(),
            })
        }
        Some(Value::Bool(b)) => *b,
        Some(other) => {
            return Err(Error::Record {
                line,
                message: format!("field \"satire\" must be a boolean, found {other}"),
            })
        }
    };
    let paid = match obj.get("paid") {
        None | Some(Value::Null) => None,
        Some(Value::Bool(b)) => Some(*b),
        Some(other) => {
            return Err(Error::Record {
                line,
                message: format!("field \"paid\" must be a boolean or null, found {other}"),
            })
        }
    };
    let id = match obj.get("id") {
        None | Some(Value::Null) => line.to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        Some(other) => {
            return Err(Error::Record {
                line,
                message: format!("field \"id\" must be a string, found {other}"),
            })
        }
    };
    let mut fields = fields.into_iter();
    let mut next = || fields.next().unwrap();
    Ok(Article {
        id,
        url: next(),
        title: next(),
        body: next(),
        category: next(),
        date: next(),
        publisher: next(),
        satire,
        paid,
    })
}

/// Parses corpus JSONL. Blank lines are skipped; a record without an `id` key
/// gets its 1-based line number as id.
pub fn parse_corpus<R: BufRead>(reader: R) -> std::io::Result<LoadedCorpus> {
    let mut out = LoadedCorpus::default();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(&line, lineno) {
            Ok(article) => {
                if !seen.insert(article.id.clone()) {
                    out.errors.push(Error::Record {
                        line: lineno,
                        message: format!("duplicate id {:?}", article.id),
                    });
                    continue;
                }
                out.articles.push(article);
                out.lines.push(lineno);
            }
            Err(e) => out.errors.push(e),
        }
    }
    Ok(out)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<LoadedCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(BufReader::new(file)).map_err(|e| Error::io(path, e))
}

/// Writes articles as JSONL with explicit ids, one record per line.
pub fn write_corpus<W: Write>(mut writer: W, articles: &[Article]) -> std::io::Result<()> {
    for a in articles {
        serde_json::to_writer(&mut writer, a)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
