use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{channel_in_range, ScorerError};

/// Channels supplied by one score-file line; absent fields are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PartialScores {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_nli: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_sem: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl PartialScores {
    /// Field-wise override: every channel present in `later` wins.
    pub fn merge(&mut self, later: PartialScores) {
        if later.s_nli.is_some() {
            self.s_nli = later.s_nli;
        }
        if later.s_sem.is_some() {
            self.s_sem = later.s_sem;
        }
        self.extras.extend(later.extras);
    }
}

#[derive(Debug, Deserialize)]
struct ScoreLine {
    id: String,
    #[serde(flatten)]
    scores: PartialScores,
}

pub type ScoreMap = HashMap<String, PartialScores>;

pub fn parse_scores(text: &str) -> Result<ScoreMap, ScorerError> {
    let mut map = ScoreMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let entry: ScoreLine = serde_json::from_str(line).map_err(|e| ScorerError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let checks = [("s_nli", entry.scores.s_nli), ("s_sem", entry.scores.s_sem)]
            .into_iter()
            .filter_map(|(c, v)| v.map(|v| (c.to_string(), v)))
            .chain(entry.scores.extras.iter().map(|(k, v)| (k.clone(), *v)));
        for (channel, value) in checks {
            if !channel_in_range(&channel, value) {
                return Err(ScorerError::Range {
                    id: entry.id,
                    line: line_no,
                    channel,
                    value,
                });
            }
        }
        map.entry(entry.id).or_default().merge(entry.scores);
    }
    Ok(map)
}

pub fn load_scores(path: impl AsRef<Path>) -> Result<ScoreMap, ScorerError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ScorerError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scores(&text)
}

/// Loads several files in order; later files override earlier ones field-wise.
pub fn load_score_files<P: AsRef<Path>>(paths: &[P]) -> Result<ScoreMap, ScorerError> {
    let mut merged = ScoreMap::new();
    for path in paths {
        for (id, scores) in load_scores(path)? {
            merged.entry(id).or_default().merge(scores);
        }
    }
    Ok(merged)
}
