//! Batch commands behind the `asr-intel` binary.
//!
//! Each command reads a corpus, resolves score channels, writes its report
//! files under `out`, and returns the text it would print. Output is
//! deterministic for fixed inputs and seed.

mod commands;
mod render;

pub use commands::{correctability, fit_weights, plot_data, score, CommandOutput};

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::correctability::CorrectabilityError;
use crate::corpus::CorpusError;
use crate::fit::{FitError, Weights};
use crate::phonetic::{Lexicon, PhoneticError};
use crate::scorer::remote::RemoteConfig;
use crate::scorer::{load_score_files, Assembler, RemoteScorer, ScoreCache, ScorerError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Scorer(#[from] ScorerError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Phonetic(#[from] PhoneticError),
    #[error(transparent)]
    Correctability(#[from] CorrectabilityError),
    #[error("{0}")]
    Config(String),
    #[error("need at least {need} rated records, found {found}")]
    TooFewRatings { need: usize, found: usize },
    #[error("records without ratings: {}", .0.join(", "))]
    MissingRatings(Vec<String>),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSource {
    Literal(Weights),
    FitReport(PathBuf),
}

impl WeightSource {
    /// Parses `a,b,g`.
    pub fn parse_literal(text: &str) -> Result<Self, CliError> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Config(format!("--weights {text:?}: {e}")))?;
        match parts[..] {
            [a, b, g] => Ok(WeightSource::Literal(Weights::new(a, b, g)?)),
            _ => Err(CliError::Config(format!(
                "--weights {text:?}: expected three comma-separated numbers"
            ))),
        }
    }

    pub fn resolve(&self) -> Result<Weights, CliError> {
        match self {
            WeightSource::Literal(w) => Ok(*w),
            WeightSource::FitReport(path) => {
                let text = read(path)?;
                #[derive(Deserialize)]
                struct Report {
                    #[serde(rename = "final")]
                    final_fit: Final,
                }
                #[derive(Deserialize)]
                struct Final {
                    normalized: Weights,
                }
                let report: Report = serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: not a fit report: {e}", path.display())))?;
                Ok(report.final_fit.normalized)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Tsv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: PathBuf,
    /// Applied in order; later files override earlier ones.
    pub scores: Vec<PathBuf>,
    pub endpoint: Option<String>,
    /// `None` selects the bundled lexicon.
    pub lexicon: Option<PathBuf>,
    pub weights: Option<WeightSource>,
    pub seed: u64,
    pub folds: usize,
    pub out: PathBuf,
    pub format: ReportFormat,
    pub concurrency: usize,
    /// Use Psim I instead of Psim II for correctability correlation.
    pub psim_phoneme: bool,
}

impl RunConfig {
    pub fn new(corpus: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            corpus: corpus.into(),
            scores: Vec::new(),
            endpoint: None,
            lexicon: None,
            weights: None,
            seed: 0,
            folds: 5,
            out: out.into(),
            format: ReportFormat::Tsv,
            concurrency: crate::scorer::DEFAULT_CONCURRENCY,
            psim_phoneme: false,
        }
    }

    fn weights(&self) -> Result<Weights, CliError> {
        self.weights
            .as_ref()
            .ok_or_else(|| CliError::Config("a weight source is required: --weights a,b,g or --fit-report path".into()))?
            .resolve()
    }

    fn lexicon(&self) -> Result<Lexicon, CliError> {
        Ok(match &self.lexicon {
            Some(path) => Lexicon::load(path)?,
            None => Lexicon::bundled(),
        })
    }

    fn assembler(&self) -> Result<Assembler, CliError> {
        let files = load_score_files(&self.scores)?;
        let mut assembler = Assembler::new(files, self.lexicon()?).with_concurrency(self.concurrency);
        if let Some(endpoint) = &self.endpoint {
            let remote = RemoteScorer::connect(RemoteConfig::new(endpoint.clone()))?;
            let cache = ScoreCache::open(self.out.join("scorer_cache.jsonl"))?;
            assembler = assembler.with_remote(remote, cache);
        }
        Ok(assembler)
    }

    fn ensure_out(&self) -> Result<(), CliError> {
        fs::create_dir_all(&self.out).map_err(|e| CliError::Io {
            path: self.out.display().to_string(),
            message: e.to_string(),
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
