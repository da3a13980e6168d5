//! `key=value` config files, merged into the argument list.
//!
//! Each key is the name of a long flag. The file's entries are spliced in right
//! after the subcommand name, ahead of the user's own arguments, and the parser
//! lets a later occurrence of a flag override an earlier one. So flags on the
//! command line win over the file, and the file wins over `NEWSCLF_SEED` and the
//! built-in defaults.

use std::ffi::OsString;
use std::fs;

use clap::{ArgAction, Command};

use crate::UsageError;

const VALUED_GLOBALS: [&str; 3] = ["--config", "--jobs", "--seed"];

/// Path given by `--config PATH` or `--config=PATH`, if any.
fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn subcommand_position(args: &[String], cmd: &Command) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if VALUED_GLOBALS.contains(&a.as_str()) {
            i += 2;
            continue;
        }
        if a.starts_with('-') {
            i += 1;
            continue;
        }
        return cmd.find_subcommand(a).map(|_| i);
    }
    None
}

/// Parsed `(key, value)` entries; `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, UsageError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(UsageError(format!(
                "config line {}: expected key=value",
                n + 1
            )));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(UsageError(format!(
                "config line {}: invalid key {key:?}",
                n + 1
            )));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

fn expand(
    entries: &[(String, String)],
    sub: &Command,
    root: &Command,
) -> Result<Vec<String>, UsageError> {
    let mut out = Vec::new();
    for (key, value) in entries {
        let find = |c: &Command| {
            c.get_arguments()
                .find(|a| a.get_long() == Some(key.as_str()))
                .map(|a| a.get_action().clone())
        };
        let action = match find(sub).or_else(|| find(root)) {
            Some(action) => action,
            None if root.get_subcommands().any(|s| find(s).is_some()) => continue,
            None => {
                return Err(UsageError(format!(
                    "config key {key:?} is not a known option"
                )))
            }
        };
        match action {
            ArgAction::SetTrue => match value.as_str() {
                "true" => out.push(format!("--{key}")),
                "false" => {}
                _ => {
                    return Err(UsageError(format!(
                        "config key {key:?} takes true or false"
                    )))
                }
            },
            _ => {
                out.push(format!("--{key}"));
                out.push(value.clone());
            }
        }
    }
    Ok(out)
}

/// The argument list with the config file's entries spliced in.
pub fn merge_config(args: Vec<OsString>, root: &Command) -> Result<Vec<OsString>, UsageError> {
    let strings: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let Some(path) = config_path(&strings) else {
        return Ok(args);
    };
    let Some(pos) = subcommand_position(&strings, root) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| UsageError(format!("cannot read config file {path}: {e}")))?;
    let sub = root.find_subcommand(&strings[pos]).unwrap();
    let injected = expand(&parse_config(&text)?, sub, root)?;
    let mut merged = args;
    merged.splice(pos + 1..pos + 1, injected.into_iter().map(OsString::from));
    Ok(merged)
}
