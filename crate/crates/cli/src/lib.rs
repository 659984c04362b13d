//! The `edittag` command line.
//!
//! Every subcommand reads line-aligned UTF-8 corpora or the formats defined
//! in the `edittag` library and writes to `--out` (stdout when absent).
//! Per-sentence work runs on a rayon pool sized by `--workers`; results are
//! reassembled in input order, so output bytes never depend on the worker
//! count.

mod commands;
mod config;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use edittag::editlang::Granularity;
use edittag::textcore::{tokenize, PunctClass, Sentence, SubwordVocab};
use rayon::prelude::*;

pub use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    /// Input that parses but violates a contract (exit code 1).
    Validation(String),
    /// Unreadable input or malformed file contents (exit code 2).
    Format(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Format(_) | CliError::Io(_) => 2,
        }
    }

    fn context(self, what: impl fmt::Display) -> CliError {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{what}: {m}")),
            CliError::Format(m) => CliError::Format(format!("{what}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Format(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<edittag::Error> for CliError {
    fn from(e: edittag::Error) -> CliError {
        match e {
            edittag::Error::Format { .. } => CliError::Format(e.to_string()),
            edittag::Error::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegregateMode {
    All,
    NoPnx,
    Pnx,
}

impl FromStr for SegregateMode {
    type Err = String;

    fn from_str(s: &str) -> Result<SegregateMode, String> {
        match s {
            "all" => Ok(SegregateMode::All),
            "nopnx" => Ok(SegregateMode::NoPnx),
            "pnx" => Ok(SegregateMode::Pnx),
            other => Err(format!("unknown segregation mode {other:?} (all, nopnx, pnx)")),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "edittag",
    version,
    about = "Character-level edit tagging for grammatical error correction"
)]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for the flags below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Punctuation override: one `U+XXXX` code point per line.
    #[arg(long, global = true)]
    pub punct: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SegArgs {
    /// word or subword.
    #[arg(long)]
    pub granularity: Option<Granularity>,
    /// Subword vocabulary file (one piece per line, `##` marks continuations).
    #[arg(long)]
    pub subword_vocab: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GoldArgs {
    /// Source sentences (required with --ref).
    #[arg(long)]
    pub src: Option<PathBuf>,
    /// Reference corrections, one per source line.
    #[arg(long, conflicts_with = "m2")]
    pub r#ref: Option<PathBuf>,
    /// Gold edits in M² format (sources come from its `S` lines).
    #[arg(long)]
    pub m2: Option<PathBuf>,
    /// Annotator id used from the M² file.
    #[arg(long)]
    pub annotator: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extract edit tags from parallel corpora.
    Extract {
        /// Erroneous side; repeat once per corpus.
        #[arg(long, required = true)]
        src: Vec<PathBuf>,
        /// Corrected side; one per --src.
        #[arg(long, required = true)]
        tgt: Vec<PathBuf>,
        /// Repetition factor per corpus, in --src order (default 1 each).
        #[arg(long)]
        upsample: Vec<usize>,
        #[command(flatten)]
        seg: SegArgs,
        /// Compress tags with a frequency-based selector.
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        compress: Option<bool>,
        /// Use this selector instead of building one from the input.
        #[arg(long)]
        selector_in: Option<PathBuf>,
        #[arg(long)]
        selector_out: Option<PathBuf>,
        /// all, nopnx or pnx.
        #[arg(long)]
        segregate: Option<SegregateMode>,
        /// Rewrite tags seen fewer than T times to K*.
        #[arg(long)]
        prune: Option<u64>,
        /// Write the (pruned) tag vocabulary here.
        #[arg(long)]
        vocab_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a tag vocabulary from a tag file.
    Vocab {
        #[arg(long)]
        tags: PathBuf,
        #[arg(long)]
        prune: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vocabulary size, dev OOV% and oracle F0.5 per pruning threshold.
    Stats {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        dev: PathBuf,
        /// Comma-separated thresholds.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        thresholds: Vec<u64>,
        /// Tab-separated output with a header row.
        #[arg(long)]
        tsv: bool,
    },
    /// Train the lookup baseline from a tag file.
    TrainLookup {
        #[arg(long)]
        tags: PathBuf,
        /// Restrict stored tags to this vocabulary.
        #[arg(long)]
        vocab: Option<PathBuf>,
        #[arg(long)]
        prune: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict tags with a lookup model.
    Tag {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        subword_vocab: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correct sentences with predicted tags or a lookup model.
    Apply {
        #[arg(long)]
        input: PathBuf,
        /// Tag file aligned with --input.
        #[arg(long, conflicts_with_all = ["model", "iterations", "pnx_model"])]
        tags: Option<PathBuf>,
        #[arg(long, required_unless_present = "tags")]
        model: Option<PathBuf>,
        #[arg(long)]
        iterations: Option<usize>,
        /// Punctuation model run once after the main iterations.
        #[arg(long)]
        pnx_model: Option<PathBuf>,
        #[arg(long)]
        subword_vocab: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combine system outputs by edit-level majority vote.
    Ensemble {
        #[arg(long)]
        src: PathBuf,
        /// One per system; at least two.
        #[arg(long = "hyp", required = true)]
        hyps: Vec<PathBuf>,
        /// Votes an edit needs (default k − 1).
        #[arg(long)]
        min_votes: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Precision, recall, F1 and F0.5 against gold edits.
    Score {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long)]
        hyp: PathBuf,
    },
    /// Paired approximate randomization test between two systems.
    Significance {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long)]
        hyp_a: PathBuf,
        #[arg(long)]
        hyp_b: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the punctuation set as `U+XXXX` lines.
    PunctSet,
    /// Build a subword vocabulary from whitespace-tokenized text.
    Subwords {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        /// Keep whole words seen at least this often.
        #[arg(long, default_value_t = 3)]
        min_count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded synthetic parallel corpus.
    Synth {
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        src_out: PathBuf,
        #[arg(long)]
        tgt_out: PathBuf,
    },
}

/// Everything a command needs besides its own flags.
pub struct Context {
    pub config: RunConfig,
    pub pool: rayon::ThreadPool,
    pub punct: PunctClass,
}

impl Context {
    pub fn new(cli: &Cli) -> CliResult<Context> {
        let config = match &cli.config {
            Some(path) => RunConfig::parse(&read(path)?).map_err(|e| e.context(path.display()))?,
            None => RunConfig::default(),
        };
        let workers = config.resolve(cli.workers, "workers", 0usize)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
        let punct_path = config.resolve_opt(cli.punct.clone(), "punct")?;
        let punct = match punct_path {
            Some(path) => {
                PunctClass::parse_override(&read(&path)?).map_err(|e| CliError::from(e).context(path.display()))?
            }
            None => PunctClass::Default,
        };
        Ok(Context { config, pool, punct })
    }

    /// Maps `f` over `items` on the pool. Results keep input order and the
    /// reported error is the one for the earliest failing item.
    pub fn par_map<T, R, F>(&self, items: &[T], f: F) -> CliResult<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> CliResult<R> + Sync + Send,
    {
        let results: Vec<CliResult<R>> = self
            .pool
            .install(|| items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect());
        results.into_iter().collect()
    }
}

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_sentences(path: &Path) -> CliResult<Vec<Sentence>> {
    Ok(read(path)?.lines().map(tokenize).collect())
}

pub fn read_subword_vocab(path: &Path) -> CliResult<SubwordVocab> {
    Ok(SubwordVocab::parse(&read(path)?))
}

pub fn write_output(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn sentences_to_string(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

pub fn check_counts(what: &[(&Path, usize)]) -> CliResult<()> {
    if let Some(&(first, n)) = what.first() {
        if let Some(&(other, m)) = what.iter().find(|(_, m)| *m != n) {
            return Err(CliError::Format(format!(
                "line counts differ: {} has {n}, {} has {m}",
                first.display(),
                other.display()
            )));
        }
    }
    Ok(())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let ctx = Context::new(&cli)?;
    commands::dispatch(&ctx, cli.command)
}

/// Parses `std::env::args`, runs, and maps failures to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("edittag: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
