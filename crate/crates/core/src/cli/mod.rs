//! The `disembed` command: annotated JSONL in, one JSON record per sentence out.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extractor::{extract_layered, PosPatternExtractor};
use crate::simplifier::{load_catalog, simplify, Catalog, CatalogError, Family, SimplificationResult, SimplifyConfig, SimplifyError};
use crate::treebank::{parse_record_line, AnnotatedSentence};

/// Sentences read, processed and written per batch.
const BATCH: usize = 256;

const RAW_TEXT_HINT: &str = "input must be annotated JSONL (tokens, POS, NE and a PTB parse per line); \
     run raw text through `annotate.py --input <txt> --output <jsonl>` first";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    /// Cores and contexts only.
    Simplify,
    /// Cores, contexts and layered extractions.
    #[default]
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "disembed", version, about = "Split sentences into core facts and their context")]
pub struct Args {
    /// Annotated JSONL file, one sentence per line (`-` for stdin).
    #[arg(long, conflicts_with = "sentence", required_unless_present = "sentence")]
    pub input: Option<PathBuf>,
    /// One annotated sentence as an inline JSON record.
    #[arg(long)]
    pub sentence: Option<String>,
    /// Write records here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    /// Rule catalog replacing the built-in one.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_iterations: u32,
    /// Comma-separated rule families to enable, e.g. `clause-split,parenthetical`.
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<Family>>,
    /// Worker threads; 1 disables concurrency.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    Path(PathBuf),
    Inline(String),
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input: InputSource,
    pub output: Option<PathBuf>,
    pub mode: Mode,
    pub catalog: Option<PathBuf>,
    pub max_iterations: usize,
    pub families: Option<BTreeSet<Family>>,
    pub jobs: Option<usize>,
}

impl PipelineConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let input = match (args.input, args.sentence) {
            (Some(p), None) => InputSource::Path(p),
            (None, Some(s)) => InputSource::Inline(s),
            _ => return Err(CliError::Usage("give exactly one of --input and --sentence".into())),
        };
        Ok(PipelineConfig {
            input,
            output: args.output,
            mode: args.mode,
            catalog: args.catalog,
            max_iterations: args.max_iterations as usize,
            families: args.families.map(|f| f.into_iter().collect()),
            jobs: args.jobs,
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read input {path}: {source}")]
    InputUnreadable { path: String, source: io::Error },
    #[error("catalog {path}: {source}")]
    Catalog { path: String, source: CatalogError },
    #[error("cannot write output {path}: {source}")]
    OutputUnwritable { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoreRecord {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextRecord {
    pub id: String,
    pub text: String,
    pub rule: String,
    #[serde(rename = "attachedTo")]
    pub attached_to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtractionRecord {
    pub predicate: String,
    pub subject: String,
    pub object: Option<String>,
    pub layer: String,
    #[serde(rename = "attachedTo")]
    pub attached_to: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub id: String,
    pub input: String,
    pub cores: Vec<CoreRecord>,
    pub contexts: Vec<ContextRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extractions: Option<Vec<ExtractionRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub error: String,
}

/// One output line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutputRecord {
    Result(ResultRecord),
    Error(ErrorRecord),
}

impl OutputRecord {
    pub fn is_error(&self) -> bool {
        matches!(self, OutputRecord::Error(_))
    }

    pub fn id(&self) -> &str {
        match self {
            OutputRecord::Result(r) => &r.id,
            OutputRecord::Error(e) => &e.id,
        }
    }
}

/// Builds the record for a result; extractions are attached in full mode.
pub fn emit_record(result: &SimplificationResult, extractions: Option<&[crate::extractor::Extraction]>) -> ResultRecord {
    ResultRecord {
        id: result.id.clone(),
        input: result.input.clone(),
        cores: result
            .cores
            .iter()
            .map(|c| CoreRecord {
                id: c.id.clone(),
                text: c.text.clone(),
            })
            .collect(),
        contexts: result
            .contexts
            .iter()
            .map(|c| ContextRecord {
                id: c.id.clone(),
                text: c.text.clone(),
                rule: c.rule.clone(),
                attached_to: c.attached_to.clone(),
            })
            .collect(),
        extractions: extractions.map(|es| {
            es.iter()
                .map(|e| ExtractionRecord {
                    predicate: e.predicate.text.clone(),
                    subject: e.subject.text.clone(),
                    object: e.object.as_ref().map(|o| o.text.clone()),
                    layer: e.layer.map(|l| l.to_string()).unwrap_or_default(),
                    attached_to: e.attached_to.clone(),
                })
                .collect()
        }),
    }
}

/// Serializes a record as one line, without the newline.
pub fn to_line(record: &OutputRecord) -> String {
    serde_json::to_string(record).expect("records serialize")
}

/// Simplifies one parsed sentence, or explains why it could not.
pub fn process_sentence(
    s: &AnnotatedSentence,
    catalog: &Catalog,
    config: &SimplifyConfig,
    mode: Mode,
) -> OutputRecord {
    let result = match simplify(s, catalog, config) {
        Ok(r) => r,
        Err(SimplifyError::IterationLimitExceeded(partial)) => {
            warn!(
                "{}: contexts still changing after {} rounds, emitting the partial result",
                s.id(),
                partial.rounds
            );
            *partial
        }
        Err(e) => return error_record(s.id(), Some(s.text()), e.to_string()),
    };
    let extractions = match mode {
        Mode::Simplify => None,
        Mode::Full => match extract_layered(&result, &PosPatternExtractor) {
            Ok(es) => Some(es),
            Err(e) => return error_record(s.id(), Some(s.text()), e.to_string()),
        },
    };
    OutputRecord::Result(emit_record(&result, extractions.as_deref()))
}

fn error_record(id: &str, input: Option<&str>, error: String) -> OutputRecord {
    OutputRecord::Error(ErrorRecord {
        id: id.to_string(),
        input: input.map(str::to_string),
        error,
    })
}

/// What a run produced.
#[derive(Debug, Default)]
pub struct RunSummary {
    pub records: usize,
    pub failed: usize,
}

impl RunSummary {
    /// 1 when every sentence failed, 0 otherwise (an empty input succeeds).
    pub fn exit_code(&self) -> i32 {
        if self.records > 0 && self.failed == self.records {
            1
        } else {
            0
        }
    }
}

fn load_config_catalog(config: &PipelineConfig) -> Result<Catalog, CliError> {
    let catalog = match &config.catalog {
        None => Catalog::default_catalog(),
        Some(path) => {
            let shown = path.display().to_string();
            let src = std::fs::read_to_string(path).map_err(|source| CliError::InputUnreadable {
                path: shown.clone(),
                source,
            })?;
            load_catalog(&src).map_err(|source| CliError::Catalog { path: shown, source })?
        }
    };
    Ok(match &config.families {
        Some(f) => catalog.restrict(f),
        None => catalog,
    })
}

fn looks_annotated(line: &str) -> bool {
    line.trim_start().starts_with('{')
}

/// Runs the pipeline, writing one line per input sentence in input order.
pub fn run(config: &PipelineConfig) -> Result<RunSummary, CliError> {
    let catalog = load_config_catalog(config)?;
    let simplify_config = SimplifyConfig {
        max_iterations: config.max_iterations,
        ..SimplifyConfig::default()
    };
    if simplify_config.max_iterations == 0 {
        return Err(CliError::Usage("--max-iterations must be at least 1".into()));
    }

    let reader: Box<dyn BufRead> = match &config.input {
        InputSource::Inline(s) => {
            if !looks_annotated(s) {
                return Err(CliError::Usage(format!("--sentence got raw text; {RAW_TEXT_HINT}")));
            }
            Box::new(io::Cursor::new(s.replace('\n', " ").into_bytes()))
        }
        InputSource::Path(p) if p.as_os_str() == "-" => Box::new(io::stdin().lock()),
        InputSource::Path(p) => {
            let f = File::open(p).map_err(|source| CliError::InputUnreadable {
                path: p.display().to_string(),
                source,
            })?;
            Box::new(BufReader::new(f))
        }
    };
    let (out_name, out): (String, Box<dyn Write>) = match &config.output {
        None => ("stdout".into(), Box::new(io::stdout().lock())),
        Some(p) => {
            let f = File::create(p).map_err(|source| CliError::OutputUnwritable {
                path: p.display().to_string(),
                source,
            })?;
            (p.display().to_string(), Box::new(f))
        }
    };
    let mut out = BufWriter::new(out);
    let write_err = |source| CliError::OutputUnwritable {
        path: out_name.clone(),
        source,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;

    let mut summary = RunSummary::default();
    let mut lines = reader.lines().enumerate();
    let mut first = true;
    loop {
        let mut batch = Vec::with_capacity(BATCH);
        for (n, line) in lines.by_ref() {
            let line = line.map_err(|source| CliError::InputUnreadable {
                path: format!("{:?}", config.input),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            if first && !looks_annotated(&line) {
                return Err(CliError::Usage(format!("line {}: {RAW_TEXT_HINT}", n + 1)));
            }
            first = false;
            batch.push((n + 1, line));
            if batch.len() == BATCH {
                break;
            }
        }
        if batch.is_empty() {
            break;
        }
        let records: Vec<OutputRecord> = pool.install(|| {
            batch
                .par_iter()
                .map(|(n, line)| match parse_record_line(line) {
                    Ok(s) => process_sentence(&s, &catalog, &simplify_config, config.mode),
                    Err(cause) => error_record(&format!("line-{n}"), None, format!("line {n}: {cause}")),
                })
                .collect()
        });
        for r in &records {
            summary.records += 1;
            if let OutputRecord::Error(e) = r {
                summary.failed += 1;
                warn!("{}: {}", e.id, e.error);
            }
            writeln!(out, "{}", to_line(r)).map_err(write_err)?;
        }
    }
    out.flush().map_err(write_err)?;
    Ok(summary)
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = PipelineConfig::from_args(args).and_then(|c| run(&c));
    match result {
        Ok(summary) => {
            if summary.exit_code() != 0 {
                eprintln!("disembed: all {} sentences failed", summary.records);
            }
            summary.exit_code()
        }
        Err(e) => {
            eprintln!("disembed: {e}");
            e.exit_code()
        }
    }
}
