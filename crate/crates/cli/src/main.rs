mod output;
mod reports;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cqscope::corpus::{load_corpus, Corpus, CorpusFormat};
use cqscope::correspondence::SignalRules;
use cqscope::linguistics::{load_overrides, ConlluBank, TaggerSource};
use cqscope::pipeline::PipelineConfig;
use cqscope::signatures::CanonOptions;

use crate::output::{Emit, Writer};

/// Competency question and SPARQL-OWL corpus analysis.
#[derive(Parser, Debug)]
#[command(name = "cqscope", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Check corpus integrity and query well-formedness.
    Validate,
    /// Per-CQ tokens, chunks and pattern candidates.
    Chunk,
    /// Pattern inventories, coverage, reuse and averages.
    Patterns,
    /// Surface features of every CQ.
    Classify,
    /// Parsed queries, parse errors and translatability.
    Parse,
    /// Keyword usage across queries.
    Keywords,
    /// Query signature groups.
    Signatures,
    /// Pattern to signature mappings.
    Map,
    /// Built-in signal rules and discovered n-gram signals.
    Signals,
    /// Every report in one pass.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Chunk => "chunk",
            Command::Patterns => "patterns",
            Command::Classify => "classify",
            Command::Parse => "parse",
            Command::Keywords => "keywords",
            Command::Signatures => "signatures",
            Command::Map => "map",
            Command::Signals => "signals",
            Command::Report => "report",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum TaggerArg {
    Builtin,
    Conllu,
}

#[derive(Args, Debug, Clone)]
struct Options {
    /// Corpus file (jsonl) or directory (dataset_dir).
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Corpus format: jsonl or dataset_dir.
    #[arg(long, global = true, default_value = "jsonl")]
    format: String,
    #[arg(long, global = true, value_enum, default_value = "builtin")]
    tagger: TaggerArg,
    /// CoNLL-U file or directory, required with `--tagger conllu`.
    #[arg(long, global = true)]
    conllu_dir: Option<PathBuf>,
    /// JSON object mapping CQ ids to corrected pattern text.
    #[arg(long, global = true)]
    overrides: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Comma-separated output formats: csv, md.
    #[arg(long, global = true, default_value = "csv,md")]
    emit: String,
    /// Queries with more flattened triples are skipped by signature grouping.
    #[arg(long, global = true, default_value_t = cqscope::signatures::DEFAULT_MAX_TRIPLES)]
    max_triples: usize,
    /// File with one stop word per line for signal discovery.
    #[arg(long, global = true)]
    stoplist: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 2)]
    min_support: usize,
    /// Signal rule definitions (JSON); the built-in rules otherwise.
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    /// Also write computed values next to the published reference values.
    #[arg(long, global = true)]
    paper_calibration: bool,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Validation(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, &cli.opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Validation(msg) | Failure::Internal(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

struct Loaded {
    corpus: Corpus,
    config: PipelineConfig,
    emit: Emit,
}

fn load(opts: &Options) -> Result<Loaded, Failure> {
    let invalid = Failure::Validation;
    let corpus_path = opts.corpus.as_ref().ok_or_else(|| invalid("--corpus is required".into()))?;
    let format: CorpusFormat = opts.format.parse().map_err(invalid)?;
    let emit: Emit = opts.emit.parse().map_err(invalid)?;
    if opts.max_triples == 0 {
        return Err(invalid("--max-triples must be positive".into()));
    }
    if opts.min_support < 2 {
        return Err(invalid("--min-support must be at least 2".into()));
    }
    let corpus = load_corpus(corpus_path, format).map_err(|e| invalid(e.to_string()))?;

    let mut config = PipelineConfig { canon: CanonOptions { max_triples: opts.max_triples }, min_support: opts.min_support, ..Default::default() };
    config.tagger = match (opts.tagger, &opts.conllu_dir) {
        (TaggerArg::Builtin, _) => TaggerSource::Builtin,
        (TaggerArg::Conllu, Some(dir)) => {
            TaggerSource::Conllu(ConlluBank::load(dir).map_err(|e| invalid(format!("{}: {e}", dir.display())))?)
        }
        (TaggerArg::Conllu, None) => return Err(invalid("--tagger conllu requires --conllu-dir".into())),
    };
    if let Some(path) = &opts.overrides {
        config.overrides = load_overrides(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &opts.stoplist {
        config.stoplist = read_text(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
    }
    if let Some(path) = &opts.rules {
        config.rules = SignalRules::from_json(&read_text(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(Loaded { corpus, config, emit })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn run(command: Command, opts: &Options) -> Result<(), Failure> {
    let Loaded { corpus, config, emit } = load(opts)?;
    let mut w = Writer::create(&opts.out, emit).map_err(|e| Failure::Validation(format!("{}: {e}", opts.out.display())))?;
    let internal = |e: anyhow::Error| Failure::Internal(format!("{e:#}"));

    let mut validation_failed = None;
    match command {
        Command::Validate => {
            let issues = reports::validate(&corpus, &mut w).map_err(internal)?;
            if issues > 0 {
                validation_failed = Some(format!("{issues} query issue(s); see {}", opts.out.join("validation.*").display()));
            }
        }
        Command::Report => reports::all(&corpus, &config, &mut w).map_err(internal)?,
        other => reports::single(other, &corpus, &config, &mut w).map_err(internal)?,
    }
    if opts.paper_calibration {
        reports::calibration(&corpus, &config, &mut w).map_err(internal)?;
    }
    w.finish(&output::Manifest::new(command.name(), opts, &corpus)).map_err(internal)?;
    match validation_failed {
        Some(msg) => Err(Failure::Validation(msg)),
        None => Ok(()),
    }
}
