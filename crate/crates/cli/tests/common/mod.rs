#![allow(dead_code)]

use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::Command;

use newsclf::corpus::{write_corpus, Article};
use newsclf::synth::{generate, SynthConfig};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// Path from the final `OUT <path>` line.
    pub fn out(&self) -> PathBuf {
        let last = self.stdout.lines().last().unwrap_or_default();
        PathBuf::from(
            last.strip_prefix("OUT ")
                .unwrap_or_else(|| panic!("no OUT line: {}", self.stdout)),
        )
    }
}

pub fn newsclf(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_newsclf"));
    cmd.current_dir(dir).args(args).env_remove("NEWSCLF_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn ok(dir: &Path, args: &[&str]) -> Run {
    let run = newsclf(dir, args, &[]);
    assert_eq!(run.code, 0, "{args:?}\n{}\n{}", run.stdout, run.stderr);
    run
}

pub fn write_articles(path: &Path, articles: &[Article]) {
    write_corpus(File::create(path).unwrap(), articles).unwrap();
}

pub fn synthetic(n_docs: usize) -> Vec<Article> {
    generate(&SynthConfig {
        n_docs,
        ..SynthConfig::default()
    })
    .unwrap()
}
