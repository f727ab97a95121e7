//! LLM-correction analysis: oracle selection between base and corrected
//! hypotheses, and how correctability relates to phonetic similarity.

use serde::Serialize;
use thiserror::Error;

use crate::align::{wer, AlignError};
use crate::corpus::{normalize, TranscriptRecord};
use crate::fit::{pearson, pearson_pvalue, FitError};
use crate::phonetic::{psim_phoneme, psim_soundex, Lexicon};

/// Correction prompt used to produce corrected hypotheses outside this crate.
pub const CORRECTION_PROMPT: &str = "Correct this ASR transcript for readability, clarity, and spelling while preserving the original meaning. Make minimal changes, fixing errors or incorrect terms and names without unnecessary rephrasing.";

#[derive(Debug, Error, PartialEq)]
pub enum CorrectabilityError {
    #[error("records without corrected_hypothesis: {}", .0.join(", "))]
    MissingCorrection(Vec<String>),
    #[error("record {id:?}: {source}")]
    Align {
        id: String,
        #[source]
        source: AlignError,
    },
    #[error("no records")]
    EmptyCorpus,
    #[error(transparent)]
    Fit(#[from] FitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Choice {
    Base,
    Corrected,
}

#[derive(Debug, Clone, Copy)]
pub enum PhoneticChannel<'a> {
    /// Psim II, the integrated metric's phonetic channel.
    Soundex,
    /// Psim I, for sensitivity analysis.
    Phoneme(&'a Lexicon),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectabilityRecord {
    pub id: String,
    pub system_id: String,
    pub wer_base: f64,
    pub wer_corrected: f64,
    /// `wer_base - wer_corrected`; positive when the correction helped.
    pub delta: f64,
    pub psim_uncorrected: f64,
    pub chosen: Choice,
}

impl CorrectabilityRecord {
    pub fn chosen_wer(&self) -> f64 {
        match self.chosen {
            Choice::Base => self.wer_base,
            Choice::Corrected => self.wer_corrected,
        }
    }
}

/// Keeps the correction only when it strictly lowers WER; ties keep the base.
pub fn oracle_select(record: &TranscriptRecord, channel: PhoneticChannel<'_>) -> Result<CorrectabilityRecord, CorrectabilityError> {
    let corrected = record
        .corrected_hypothesis
        .as_deref()
        .ok_or_else(|| CorrectabilityError::MissingCorrection(vec![record.id.clone()]))?;
    let reference = normalize(&record.reference);
    let base = normalize(&record.hypothesis);
    let align_err = |source| CorrectabilityError::Align {
        id: record.id.clone(),
        source,
    };
    let wer_base = wer(&reference, &base).map_err(align_err)?.wer;
    let wer_corrected = wer(&reference, &normalize(corrected)).map_err(align_err)?.wer;
    let psim_uncorrected = match channel {
        PhoneticChannel::Soundex => psim_soundex(&reference, &base),
        PhoneticChannel::Phoneme(lexicon) => psim_phoneme(&reference, &base, lexicon),
    };
    Ok(CorrectabilityRecord {
        id: record.id.clone(),
        system_id: record.system_id.clone(),
        wer_base,
        wer_corrected,
        delta: wer_base - wer_corrected,
        psim_uncorrected,
        chosen: if wer_corrected < wer_base {
            Choice::Corrected
        } else {
            Choice::Base
        },
    })
}

/// Selects every record, reporting all records that lack a correction at once.
pub fn oracle_select_all(records: &[TranscriptRecord], channel: PhoneticChannel<'_>) -> Result<Vec<CorrectabilityRecord>, CorrectabilityError> {
    let missing: Vec<String> = records
        .iter()
        .filter(|r| r.corrected_hypothesis.is_none())
        .map(|r| r.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(CorrectabilityError::MissingCorrection(missing));
    }
    records.iter().map(|r| oracle_select(r, channel)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleWer {
    pub without: f64,
    pub with_all: f64,
    pub oracle: f64,
}

/// Macro WER of base, corrected, and oracle-selected hypotheses.
pub fn oracle_corpus_wer(records: &[CorrectabilityRecord]) -> Result<OracleWer, CorrectabilityError> {
    if records.is_empty() {
        return Err(CorrectabilityError::EmptyCorpus);
    }
    let n = records.len() as f64;
    let mean = |f: fn(&CorrectabilityRecord) -> f64| records.iter().map(f).sum::<f64>() / n;
    Ok(OracleWer {
        without: mean(|r| r.wer_base),
        with_all: mean(|r| r.wer_corrected),
        oracle: mean(CorrectabilityRecord::chosen_wer),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlation {
    pub r: f64,
    pub p: f64,
    pub n: usize,
}

/// Pearson correlation between correctability (delta) and the uncorrected
/// hypothesis' phonetic similarity, pooled over all records.
pub fn correctability_correlation(records: &[CorrectabilityRecord]) -> Result<Correlation, CorrectabilityError> {
    let delta: Vec<f64> = records.iter().map(|r| r.delta).collect();
    let psim: Vec<f64> = records.iter().map(|r| r.psim_uncorrected).collect();
    let r = pearson(&delta, &psim)?;
    Ok(Correlation {
        r,
        p: pearson_pvalue(r, records.len())?,
        n: records.len(),
    })
}
