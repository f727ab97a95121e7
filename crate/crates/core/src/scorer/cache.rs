//! Write-through cache of remotely fetched scores.
//!
//! Entries live in a JSONL file with the score-file schema, where `id` is the
//! hex SHA-256 of (normalized reference, normalized hypothesis, scorer version).

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::files::{parse_scores, PartialScores};
use super::ScorerError;
use crate::corpus::normalize;

pub fn cache_key(reference: &str, hypothesis: &str, scorer_version: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(normalize(reference).joined().as_bytes());
    hasher.update([0x1f]);
    hasher.update(normalize(hypothesis).joined().as_bytes());
    hasher.update([0x1f]);
    hasher.update(scorer_version.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Default)]
pub struct ScoreCache {
    path: Option<PathBuf>,
    entries: HashMap<String, PartialScores>,
}

#[derive(Serialize)]
struct CacheLine<'a> {
    id: &'a str,
    #[serde(flatten)]
    scores: &'a PartialScores,
}

impl ScoreCache {
    /// In-memory only.
    pub fn ephemeral() -> Self {
        Self::default()
    }

    /// Opens (or starts) a cache file. A missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, ScorerError> {
        let path = path.as_ref().to_path_buf();
        let entries = match fs::read_to_string(&path) {
            Ok(text) => parse_scores(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => HashMap::new(),
            Err(e) => {
                return Err(ScorerError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })
            }
        };
        Ok(ScoreCache {
            path: Some(path),
            entries,
        })
    }

    pub fn get(&self, key: &str) -> Option<&PartialScores> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Persists the entry before making it visible.
    pub fn insert(&mut self, key: String, scores: PartialScores) -> Result<(), ScorerError> {
        if let Some(path) = &self.path {
            let io_err = |e: std::io::Error| ScorerError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            };
            let line = serde_json::to_string(&CacheLine {
                id: &key,
                scores: &scores,
            })
            .expect("score entries serialize");
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(io_err)?;
            writeln!(file, "{line}").map_err(io_err)?;
        }
        self.entries.insert(key, scores);
        Ok(())
    }
}
