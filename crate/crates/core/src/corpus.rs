//! Transcript records, text normalization and JSONL corpus ingestion.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    Parse { line: usize, message: String },
    #[error("record {id:?} (line {line}): {message}")]
    Invalid {
        id: String,
        line: usize,
        message: String,
    },
    #[error("duplicate id {id:?} on lines {first} and {second}")]
    DuplicateId {
        id: String,
        first: usize,
        second: usize,
    },
    #[error("record {0:?} has no ratings")]
    MissingRatings(String),
    #[error("ratings matrix is incomplete: {0}")]
    IncompleteMatrix(String),
}

/// Speech-impairment severity stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Severity {
    High,
    Medium,
    Low,
    VeryLow,
    #[default]
    Unknown,
}

impl Severity {
    /// Reporting order for stratified tables.
    pub const LABELLED: [Severity; 4] = [
        Severity::High,
        Severity::Medium,
        Severity::Low,
        Severity::VeryLow,
    ];

    pub fn label(self) -> Option<&'static str> {
        match self {
            Severity::High => Some("H"),
            Severity::Medium => Some("M"),
            Severity::Low => Some("L"),
            Severity::VeryLow => Some("VL"),
            Severity::Unknown => None,
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "H" => Some(Severity::High),
            "M" => Some(Severity::Medium),
            "L" => Some(Severity::Low),
            "VL" => Some(Severity::VeryLow),
            _ => None,
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label().unwrap_or("?"))
    }
}

impl Serialize for Severity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.label() {
            Some(label) => serializer.serialize_str(label),
            None => serializer.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Severity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let label = Option::<String>::deserialize(deserializer)?;
        match label.as_deref() {
            None => Ok(Severity::Unknown),
            Some(l) => Severity::from_label(l).ok_or_else(|| {
                serde::de::Error::custom(format!(
                    "unknown severity {l:?} (expected H, M, L, VL or null)"
                ))
            }),
        }
    }
}

/// One utterance: reference, ASR hypothesis and optional LLM correction and ratings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub id: String,
    pub system_id: String,
    #[serde(default)]
    pub severity: Severity,
    pub reference: String,
    pub hypothesis: String,
    #[serde(default)]
    pub corrected_hypothesis: Option<String>,
    #[serde(default)]
    pub ratings: Option<Vec<i64>>,
}

impl TranscriptRecord {
    fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("id is empty".into());
        }
        if normalize(&self.reference).is_empty() {
            return Err("reference is empty after normalization".into());
        }
        if let Some(ratings) = &self.ratings {
            if let Some(r) = ratings.iter().find(|r| !(1..=5).contains(*r)) {
                return Err(format!("rating {r} outside 1..=5"));
            }
        }
        Ok(())
    }
}

/// Whitespace-tokenized, uppercased text restricted to `[A-Z0-9']`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedText {
    tokens: Vec<String>,
    original: String,
}

impl NormalizedText {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn original(&self) -> &str {
        &self.original
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Tokens joined by single spaces.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Uppercases, splits on whitespace and hyphens, deletes characters outside
/// `[A-Z0-9']` and trims apostrophes at token edges.
///
/// Non-ASCII letters are deleted rather than transliterated.
pub fn normalize(text: &str) -> NormalizedText {
    let tokens = text
        .split(|c: char| c.is_whitespace() || c == '-')
        .filter_map(|raw| {
            let cleaned: String = raw
                .chars()
                .flat_map(char::to_uppercase)
                .filter(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || *c == '\'')
                .collect();
            let trimmed = cleaned.trim_matches('\'');
            (!trimmed.is_empty()).then(|| trimmed.to_string())
        })
        .collect();
    NormalizedText {
        tokens,
        original: text.to_string(),
    }
}

/// Loads and validates a JSONL corpus. Blank lines are skipped.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<TranscriptRecord>, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&text)
}

pub fn parse_corpus(text: &str) -> Result<Vec<TranscriptRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: TranscriptRecord =
            serde_json::from_str(line).map_err(|e| CorpusError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
        record.validate().map_err(|message| CorpusError::Invalid {
            id: record.id.clone(),
            line: line_no,
            message,
        })?;
        if let Some(&first) = seen.get(&record.id) {
            return Err(CorpusError::DuplicateId {
                id: record.id,
                first,
                second: line_no,
            });
        }
        seen.insert(record.id.clone(), line_no);
        records.push(record);
    }
    Ok(records)
}

/// Serializes records as JSONL, one object per line.
pub fn write_corpus<W: Write>(records: &[TranscriptRecord], mut out: W) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn mean_rating(record: &TranscriptRecord) -> Result<f64, CorpusError> {
    match record.ratings.as_deref() {
        Some(ratings) if !ratings.is_empty() => {
            Ok(ratings.iter().sum::<i64>() as f64 / ratings.len() as f64)
        }
        _ => Err(CorpusError::MissingRatings(record.id.clone())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCorrelation {
    pub annotator_a: usize,
    pub annotator_b: usize,
    /// `None` when either annotator gave a constant rating.
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agreement {
    pub pairwise_pearson: Vec<PairCorrelation>,
    pub min_r: Option<f64>,
    pub max_r: Option<f64>,
    /// Population standard deviation over every individual rating.
    pub rating_std: f64,
}

/// Inter-annotator agreement for an N pairs × M annotators rating matrix.
pub fn annotator_agreement(matrix: &[Vec<f64>]) -> Result<Agreement, CorpusError> {
    let m = matrix.first().map(Vec::len).unwrap_or(0);
    if matrix.is_empty() {
        return Err(CorpusError::IncompleteMatrix("no rows".into()));
    }
    if m < 2 {
        return Err(CorpusError::IncompleteMatrix(format!(
            "need at least 2 annotators, got {m}"
        )));
    }
    if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(CorpusError::IncompleteMatrix(format!(
            "row {row} has {} ratings, expected {m}",
            r.len()
        )));
    }

    let column = |j: usize| -> Vec<f64> { matrix.iter().map(|row| row[j]).collect() };
    let mut pairwise = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        for b in a + 1..m {
            let r = crate::fit::stats::pearson(&column(a), &column(b)).ok();
            pairwise.push(PairCorrelation {
                annotator_a: a,
                annotator_b: b,
                r,
            });
        }
    }
    let defined: Vec<f64> = pairwise.iter().filter_map(|p| p.r).collect();
    let min_r = defined.iter().copied().reduce(f64::min);
    let max_r = defined.iter().copied().reduce(f64::max);

    let all: Vec<f64> = matrix.iter().flatten().copied().collect();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let var = all.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / all.len() as f64;

    Ok(Agreement {
        pairwise_pearson: pairwise,
        min_r,
        max_r,
        rating_std: var.sqrt(),
    })
}

/// Builds the rating matrix from records; every record must carry the same
/// number of ratings.
pub fn ratings_matrix(records: &[TranscriptRecord]) -> Result<Vec<Vec<f64>>, CorpusError> {
    records
        .iter()
        .map(|r| match r.ratings.as_deref() {
            Some(ratings) if !ratings.is_empty() => {
                Ok(ratings.iter().map(|&x| x as f64).collect())
            }
            _ => Err(CorpusError::MissingRatings(r.id.clone())),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(text: &str) -> Vec<String> {
        normalize(text).tokens().to_vec()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(toks("open duolingo."), ["OPEN", "DUOLINGO"]);
        assert_eq!(
            toks("SET THE AIR CONDITIONING"),
            ["SET", "THE", "AIR", "CONDITIONING"]
        );
        assert_eq!(toks("  don't   stop "), ["DON'T", "STOP"]);
        assert!(toks("").is_empty());
    }

    #[test]
    fn normalize_hyphens_and_edge_apostrophes() {
        assert_eq!(toks("air-conditioning"), ["AIR", "CONDITIONING"]);
        assert_eq!(toks("'quoted' rock'n'roll"), ["QUOTED", "ROCK'N'ROLL"]);
        assert_eq!(toks("room 101!"), ["ROOM", "101"]);
        assert!(toks("... ' -").is_empty());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(text in "\\PC{0,40}") {
            let once = normalize(&text);
            let twice = normalize(&once.joined());
            prop_assert_eq!(once.tokens(), twice.tokens());
            for t in once.tokens() {
                prop_assert!(t.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '\''));
            }
        }

        #[test]
        fn mean_rating_within_bounds(ratings in prop::collection::vec(1i64..=5, 1..10)) {
            let rec = record("x", Some(ratings.clone()));
            let mean = mean_rating(&rec).unwrap();
            let lo = *ratings.iter().min().unwrap() as f64;
            let hi = *ratings.iter().max().unwrap() as f64;
            prop_assert!(mean >= lo && mean <= hi);
        }
    }

    fn record(id: &str, ratings: Option<Vec<i64>>) -> TranscriptRecord {
        TranscriptRecord {
            id: id.into(),
            system_id: "whisper".into(),
            severity: Severity::Unknown,
            reference: "open duolingo".into(),
            hypothesis: "open gulamnba".into(),
            corrected_hypothesis: None,
            ratings,
        }
    }

    #[test]
    fn mean_rating_examples() {
        let mean = |r: Vec<i64>| mean_rating(&record("x", Some(r))).unwrap();
        assert_eq!(mean(vec![3; 6]), 3.0);
        assert_eq!(mean(vec![1, 5]), 3.0);
        assert_eq!(mean(vec![4, 5, 4, 5, 4, 5]), 4.5);
        assert!(matches!(
            mean_rating(&record("x", None)),
            Err(CorpusError::MissingRatings(_))
        ));
        assert!(mean_rating(&record("x", Some(vec![]))).is_err());
    }

    #[test]
    fn parse_rejects_out_of_range_rating() {
        let text = r#"{"id":"a","system_id":"s","severity":"H","reference":"x","hypothesis":"x","ratings":[3,7]}"#;
        let err = parse_corpus(text).unwrap_err();
        match err {
            CorpusError::Invalid { id, line, .. } => {
                assert_eq!(id, "a");
                assert_eq!(line, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicate_ids() {
        let line = |id: &str| {
            format!(r#"{{"id":"{id}","system_id":"s","severity":null,"reference":"x","hypothesis":"y"}}"#)
        };
        let text = [line("u1"), line("u2"), line("u3"), line("u4"), line("u2")].join("\n");
        match parse_corpus(&text).unwrap_err() {
            CorpusError::DuplicateId { id, first, second } => {
                assert_eq!(id, "u2");
                assert_eq!((first, second), (2, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "{\"id\":\"a\",\"system_id\":\"s\",\"reference\":\"x\",\"hypothesis\":\"y\"}\n{not json";
        assert!(matches!(
            parse_corpus(text),
            Err(CorpusError::Parse { line: 2, .. })
        ));
        let punct_only = r#"{"id":"a","system_id":"s","reference":"?!","hypothesis":"y"}"#;
        assert!(matches!(
            parse_corpus(punct_only),
            Err(CorpusError::Invalid { .. })
        ));
        let bad_sev = r#"{"id":"a","system_id":"s","severity":"X","reference":"x","hypothesis":"y"}"#;
        assert!(matches!(parse_corpus(bad_sev), Err(CorpusError::Parse { .. })));
    }

    #[test]
    fn severity_null_and_missing_are_unknown() {
        let text = concat!(
            r#"{"id":"a","system_id":"s","severity":null,"reference":"x","hypothesis":"y"}"#,
            "\n",
            r#"{"id":"b","system_id":"s","reference":"x","hypothesis":"y"}"#,
            "\n",
            r#"{"id":"c","system_id":"s","severity":"VL","reference":"x","hypothesis":"y"}"#,
        );
        let recs = parse_corpus(text).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].severity, Severity::Unknown);
        assert_eq!(recs[1].severity, Severity::Unknown);
        assert_eq!(recs[2].severity, Severity::VeryLow);
    }

    #[test]
    fn agreement_identical_and_reversed_columns() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0, 2.0];
        let same: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, x]).collect();
        let agr = annotator_agreement(&same).unwrap();
        assert!((agr.pairwise_pearson[0].r.unwrap() - 1.0).abs() < 1e-12);

        let reversed: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 6.0 - x]).collect();
        let agr = annotator_agreement(&reversed).unwrap();
        assert!((agr.min_r.unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn agreement_rejects_ragged_matrix() {
        let ragged = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(matches!(
            annotator_agreement(&ragged),
            Err(CorpusError::IncompleteMatrix(_))
        ));
        assert!(annotator_agreement(&[vec![1.0], vec![2.0]]).is_err());
        assert!(annotator_agreement(&[]).is_err());
    }
}
