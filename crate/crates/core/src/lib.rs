//! Intelligibility-oriented evaluation of ASR transcripts.
//!
//! The crate scores reference/hypothesis pairs on several channels and
//! combines three of them into an integrated metric,
//!
//! ```text
//! integrated = α · s_nli + β · s_sem + γ · s_phon
//! ```
//!
//! where `s_nli` is the bidirectional entailment probability, `s_sem` the
//! BERTScore F1 and `s_phon` the Soundex/Jaro-Winkler phonetic similarity.
//! The weights are fitted to mean human ratings by OLS with k-fold
//! cross-validation ([`fit::kfold_fit`]).
//!
//! Modules:
//!
//! * [`corpus`]: records, normalization, JSONL ingestion, rating agreement
//! * [`align`]: Levenshtein alignment, WER, CER
//! * [`phonetic`]: Soundex, Jaro-Winkler, lexicon G2P, Psim I / Psim II
//! * [`scorer`]: NLI and semantic channels from files or a scorer service
//! * [`fit`]: integrated score, OLS, cross-validation, statistics
//! * [`correctability`]: oracle selection of LLM corrections
//! * [`cli`]: the `score`, `fit-weights`, `correctability` and `plot-data` commands

pub mod align;
pub mod cli;
pub mod correctability;
pub mod corpus;
pub mod fit;
pub mod phonetic;
pub mod scorer;

pub use align::{cer, corpus_wer, edit_distance, wer, Aggregation, Alignment, EditOp, WerResult};
pub use corpus::{load_corpus, normalize, NormalizedText, Severity, TranscriptRecord};
pub use fit::{integrated_score, Weights};
pub use scorer::{NliProbs, ScoreVector};
