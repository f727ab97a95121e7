// Oracle selection between base and LLM-corrected hypotheses, and the
// correlation between correctability and phonetic similarity.

use std::error::Error;
use std::path::Path;

use asr_intelligibility::correctability::{
    correctability_correlation, oracle_corpus_wer, oracle_select, oracle_select_all, PhoneticChannel,
    CORRECTION_PROMPT,
};
use asr_intelligibility::{load_corpus, Severity, TranscriptRecord};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("correction prompt:\n{CORRECTION_PROMPT}\n");

    let hallucination = TranscriptRecord {
        id: "duo".into(),
        system_id: "wav2vec".into(),
        severity: Severity::VeryLow,
        reference: "OPEN DUOLINGO".into(),
        hypothesis: "OPEN GULAMNBA".into(),
        corrected_hypothesis: Some("OPEN GULAMNBA CORRECTED TEXT OPEN GYM NBA".into()),
        ratings: None,
    };
    let pick = oracle_select(&hallucination, PhoneticChannel::Soundex)?;
    println!(
        "{}: base WER {:.2}, corrected {:.2}, keep {:?}",
        pick.id, pick.wer_base, pick.wer_corrected, pick.chosen
    );

    let corpus = load_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/corpus.jsonl"))?;
    let selected = oracle_select_all(&corpus, PhoneticChannel::Soundex)?;
    let wer = oracle_corpus_wer(&selected)?;
    println!(
        "macro WER: without {:.2}%, with all corrections {:.2}%, improved only {:.2}%",
        100.0 * wer.without,
        100.0 * wer.with_all,
        100.0 * wer.oracle
    );
    assert!(wer.oracle <= wer.without.min(wer.with_all));

    let corr = correctability_correlation(&selected)?;
    println!("correctability vs PsimII: r={:.4} p={:.3e} n={}", corr.r, corr.p, corr.n);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
