use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::Serialize;

use super::{cache_key, nli_score, PartialScores, RemoteScorer, ScoreCache, ScoreMap, ScoreVector, ScorerError};
use crate::align::wer;
use crate::corpus::{normalize, TranscriptRecord};
use crate::phonetic::{psim_phoneme, psim_soundex_detailed, Lexicon};

/// Default bound on in-flight remote fetches.
pub const DEFAULT_CONCURRENCY: usize = 4;

/// Suffix for score-file ids that describe a record's corrected hypothesis.
pub const CORRECTED_SUFFIX: &str = "#corrected";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    File,
    Remote,
    Cache,
    Local,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub s_nli: Source,
    pub s_sem: Source,
    pub s_phon: Source,
    pub wer: Source,
    /// Remote scorer version, when any channel came from the service or cache.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scorer_version: Option<String>,
}

/// A reference/hypothesis pair with every channel resolved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredText {
    pub scores: ScoreVector,
    /// Psim I, reported alongside the integrated-metric channels.
    pub psim_phoneme: f64,
    pub soundex_skipped: usize,
    pub provenance: Provenance,
}

pub struct Assembler {
    files: ScoreMap,
    remote: Option<RemoteScorer>,
    cache: Mutex<ScoreCache>,
    lexicon: Lexicon,
    concurrency: usize,
}

impl Assembler {
    pub fn new(files: ScoreMap, lexicon: Lexicon) -> Self {
        Assembler {
            files,
            remote: None,
            cache: Mutex::new(ScoreCache::ephemeral()),
            lexicon,
            concurrency: DEFAULT_CONCURRENCY,
        }
    }

    pub fn with_remote(mut self, remote: RemoteScorer, cache: ScoreCache) -> Self {
        self.remote = Some(remote);
        self.cache = Mutex::new(cache);
        self
    }

    pub fn with_concurrency(mut self, bound: usize) -> Self {
        self.concurrency = bound.max(1);
        self
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    /// Scores the record's base hypothesis, looked up under its id.
    pub fn assemble(&self, record: &TranscriptRecord) -> Result<ScoredText, ScorerError> {
        self.assemble_text(&record.id, &record.reference, &record.hypothesis)
    }

    /// Scores the record's corrected hypothesis, looked up under `<id>#corrected`.
    /// Returns `None` when the record carries no correction.
    pub fn assemble_corrected(&self, record: &TranscriptRecord) -> Option<Result<ScoredText, ScorerError>> {
        let corrected = record.corrected_hypothesis.as_deref()?;
        let key = format!("{}{CORRECTED_SUFFIX}", record.id);
        Some(self.assemble_text(&key, &record.reference, corrected))
    }

    pub fn assemble_text(&self, id: &str, reference: &str, hypothesis: &str) -> Result<ScoredText, ScorerError> {
        let ref_norm = normalize(reference);
        let hyp_norm = normalize(hypothesis);
        let wer = wer(&ref_norm, &hyp_norm)?.wer;
        let phon = psim_soundex_detailed(&ref_norm, &hyp_norm);
        let psim_i = psim_phoneme(&ref_norm, &hyp_norm, &self.lexicon);

        let file = self.files.get(id).cloned().unwrap_or_default();
        let mut provenance = Provenance {
            s_nli: Source::File,
            s_sem: Source::File,
            s_phon: Source::Local,
            wer: Source::Local,
            scorer_version: None,
        };
        let (s_nli, s_sem) = match (file.s_nli, file.s_sem) {
            (Some(n), Some(s)) => (n, s),
            (nli, sem) => {
                let Some(remote) = &self.remote else {
                    let channel = if nli.is_none() { "s_nli" } else { "s_sem" };
                    return Err(ScorerError::MissingChannel {
                        id: id.to_string(),
                        channel,
                    });
                };
                let (fetched, source) = self.remote_scores(remote, reference, hypothesis)?;
                provenance.scorer_version = Some(remote.version().to_string());
                let nli = nli.map(|v| (v, Source::File)).unwrap_or((
                    fetched.s_nli.expect("cached entries carry s_nli"),
                    source,
                ));
                let sem = sem.map(|v| (v, Source::File)).unwrap_or((
                    fetched.s_sem.expect("cached entries carry s_sem"),
                    source,
                ));
                provenance.s_nli = nli.1;
                provenance.s_sem = sem.1;
                (nli.0, sem.0)
            }
        };

        Ok(ScoredText {
            scores: ScoreVector {
                s_nli,
                s_sem,
                s_phon: phon.value,
                wer,
                extras: file.extras,
            },
            psim_phoneme: psim_i,
            soundex_skipped: phon.skipped_words,
            provenance,
        })
    }

    fn remote_scores(
        &self,
        remote: &RemoteScorer,
        reference: &str,
        hypothesis: &str,
    ) -> Result<(PartialScores, Source), ScorerError> {
        let key = cache_key(reference, hypothesis, remote.version());
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            if hit.s_nli.is_some() && hit.s_sem.is_some() {
                return Ok((hit.clone(), Source::Cache));
            }
        }
        let fetched = remote.fetch(reference, hypothesis)?;
        let scores = PartialScores {
            s_nli: Some(nli_score(&fetched.nli_forward, &fetched.nli_backward)?),
            s_sem: Some(fetched.s_sem),
            ..Default::default()
        };
        self.cache
            .lock()
            .expect("cache lock")
            .insert(key, scores.clone())?;
        Ok((scores, Source::Remote))
    }

    /// Scores `(id, reference, hypothesis)` triples with up to `concurrency`
    /// workers; results come back in input order.
    pub fn assemble_many(&self, items: &[(String, String, String)]) -> Vec<Result<ScoredText, ScorerError>> {
        let workers = self.concurrency.min(items.len()).max(1);
        if workers == 1 {
            return items
                .iter()
                .map(|(id, r, h)| self.assemble_text(id, r, h))
                .collect();
        }
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<ScoredText, ScorerError>>>> =
            items.iter().map(|_| Mutex::new(None)).collect();
        thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some((id, r, h)) = items.get(i) else { break };
                    let result = self.assemble_text(id, r, h);
                    *slots[i].lock().expect("slot lock") = Some(result);
                });
            }
        });
        slots
            .into_iter()
            .map(|s| s.into_inner().expect("slot lock").expect("every slot filled"))
            .collect()
    }
}
