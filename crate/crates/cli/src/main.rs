//! `newsclf`: satire and fake-news text classification from the command line.
//!
//! Exit status is 0 on success, 2 for usage errors (bad flags, invalid option
//! combinations, unreadable config files) and 1 for runtime failures. Each
//! written file is announced on standard output as `OUT <path>`, last.

mod commands;
mod config;
mod options;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use newsclf::eval::Protocol;
use newsclf::Fraction;

use options::{ModelArgs, PipelineArgs, TaskArg};

/// An invalid invocation, reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<newsclf::Error> for UsageError {
    fn from(e: newsclf::Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "newsclf",
    version,
    about = "Satire and fake-news text classification"
)]
struct Cli {
    /// key=value file of option defaults (keys are long flag names)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Worker threads (0 uses every core); results do not depend on it
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Master seed for splits and solvers
    #[arg(long, global = true, env = "NEWSCLF_SEED", default_value_t = 42)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SplitKindArg {
    Random,
    Stratified,
    Holdout,
    Kfold,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    Learning,
    Validation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Clean a raw JSONL corpus: strip boilerplate, normalize dates, filter by length
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 500)]
        min_chars: usize,
        #[arg(long, default_value_t = 10_000)]
        max_chars: usize,
        /// File of boilerplate patterns, one per line ("re:" prefix for a regex)
        #[arg(long)]
        strip_patterns: Option<PathBuf>,
        /// chrono date format tried after ISO-8601 (repeatable; replaces the defaults)
        #[arg(long)]
        date_format: Vec<String>,
    },
    /// Corpus counts per label and publisher, plus a body-length histogram
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Partition a corpus into train and test ids
    Split {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "random")]
        kind: SplitKindArg,
        /// Test share for random and stratified splits (default 0.2)
        #[arg(long)]
        test_fraction: Option<Fraction>,
        /// Comma-separated publishers for a holdout split
        #[arg(long, value_delimiter = ',')]
        holdout_publishers: Vec<String>,
        /// Fold count for a kfold split (default 10)
        #[arg(long)]
        folds: Option<usize>,
        #[command(flatten)]
        task: TaskArg,
    },
    /// Fit the pipeline and classifier, write a model bundle
    Train {
        #[arg(long)]
        corpus: PathBuf,
        /// Split file; training uses its train ids only
        #[arg(long)]
        split: Option<PathBuf>,
        /// Partition to use from a kfold split file
        #[arg(long, default_value_t = 0)]
        fold: usize,
        #[arg(long)]
        output: PathBuf,
        /// Also evaluate on the split's test ids and write this report
        #[arg(long, requires = "split")]
        report: Option<PathBuf>,
        #[arg(long)]
        record_timing: bool,
        #[command(flatten)]
        task: TaskArg,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Evaluate a bundle on a split, or run a named protocol end to end
    Eval {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, requires = "split", conflicts_with = "protocol")]
        bundle: Option<PathBuf>,
        #[arg(long, requires = "bundle")]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        fold: usize,
        #[arg(long, required_unless_present = "bundle")]
        protocol: Option<Protocol>,
        /// Test share for the random-split protocols
        #[arg(long, default_value = "0.2")]
        test_fraction: Fraction,
        /// Comma-separated publishers held out by publisher_holdout
        #[arg(long, value_delimiter = ',')]
        holdout_publishers: Vec<String>,
        #[arg(long)]
        record_timing: bool,
        #[command(flatten)]
        task: TaskArg,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Learning or validation curve data as CSV
    Curve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum)]
        kind: CurveKind,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        /// Comma-separated training-set sizes (learning curve)
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Comma-separated C values (validation curve)
        #[arg(long, value_delimiter = ',')]
        c_grid: Vec<f64>,
        #[command(flatten)]
        task: TaskArg,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Cross-validated search over C
    Gridsearch {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, value_delimiter = ',')]
        c_grid: Vec<f64>,
        #[command(flatten)]
        task: TaskArg,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Label articles with a saved bundle
    Predict {
        #[arg(long)]
        bundle: PathBuf,
        /// JSONL articles; only title, body and id are read
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

fn root_command() -> clap::Command {
    Cli::command()
        .args_override_self(true)
        .mut_subcommands(|s| s.args_override_self(true))
}

fn parse() -> Result<Cli, clap::Error> {
    let mut cmd = root_command();
    let args = match config::merge_config(std::env::args_os().collect(), &cmd) {
        Ok(args) => args,
        Err(e) => return Err(cmd.error(clap::error::ErrorKind::InvalidValue, e.0)),
    };
    let matches = cmd.try_get_matches_from_mut(args)?;
    Cli::from_arg_matches(&matches).map_err(|e| e.format(&mut cmd))
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| commands::run(&cli)) {
        Ok(outputs) => {
            for path in outputs {
                println!("OUT {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(1)
        }
    }
}

/// The error chain joined by ": ", skipping causes already quoted by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}
