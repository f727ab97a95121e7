//! Model-based score channels: NLI entailment and semantic similarity.
//!
//! Scores come from precomputed JSONL files or from a remote scorer service
//! (see [`remote`]); phonetic similarity and WER are always computed locally.
//! [`Assembler`] combines the sources into complete [`ScoreVector`]s.

mod assemble;
mod cache;
mod files;
pub mod remote;

pub use assemble::{Assembler, Provenance, ScoredText, Source, CORRECTED_SUFFIX, DEFAULT_CONCURRENCY};
pub use cache::{cache_key, ScoreCache};
pub use files::{load_score_files, load_scores, parse_scores, PartialScores, ScoreMap};
pub use remote::{RemoteConfig, RemoteScorer, RemoteScores};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScorerError {
    #[error("invalid NLI probabilities ({entail}, {contradict}, {neutral})")]
    InvalidProbabilities {
        entail: f64,
        contradict: f64,
        neutral: f64,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: malformed score entry: {message}")]
    Parse { line: usize, message: String },
    #[error("score for {id:?} (line {line}): {channel} = {value} out of range")]
    Range {
        id: String,
        line: usize,
        channel: String,
        value: f64,
    },
    #[error("record {id:?}: no source for channel {channel}")]
    MissingChannel { id: String, channel: &'static str },
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Align(#[from] crate::align::AlignError),
}

/// Probability triple for one inference direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NliProbs {
    pub entail: f64,
    pub contradict: f64,
    pub neutral: f64,
}

impl NliProbs {
    pub const SUM_TOLERANCE: f64 = 1e-6;

    pub fn new(entail: f64, contradict: f64, neutral: f64) -> Result<Self, ScorerError> {
        let probs = NliProbs {
            entail,
            contradict,
            neutral,
        };
        probs.validate()?;
        Ok(probs)
    }

    pub fn validate(&self) -> Result<(), ScorerError> {
        let all = [self.entail, self.contradict, self.neutral];
        let in_range = all.iter().all(|p| (0.0..=1.0).contains(p));
        let sum: f64 = all.iter().sum();
        if in_range && (sum - 1.0).abs() <= Self::SUM_TOLERANCE {
            Ok(())
        } else {
            Err(ScorerError::InvalidProbabilities {
                entail: self.entail,
                contradict: self.contradict,
                neutral: self.neutral,
            })
        }
    }
}

/// Bidirectional entailment: the mean of both directions' entailment probability.
pub fn nli_score(forward: &NliProbs, backward: &NliProbs) -> Result<f64, ScorerError> {
    forward.validate()?;
    backward.validate()?;
    Ok((forward.entail + backward.entail) / 2.0)
}

/// Every channel for one reference/hypothesis pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    /// Bidirectional entailment probability, in [0, 1].
    pub s_nli: f64,
    /// Raw BERTScore F1, in [-1, 1]; not rescaled.
    pub s_sem: f64,
    /// Psim II, in [0, 1].
    pub s_phon: f64,
    pub wer: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl ScoreVector {
    /// `[s_nli, s_sem, s_phon]`, the regression features.
    pub fn features(&self) -> [f64; 3] {
        [self.s_nli, self.s_sem, self.s_phon]
    }
}

pub(crate) fn channel_in_range(channel: &str, value: f64) -> bool {
    match channel {
        "s_nli" | "s_phon" => (0.0..=1.0).contains(&value),
        "s_sem" => (-1.0..=1.0).contains(&value),
        _ => value.is_finite(),
    }
}
