// Assembles score vectors for the demo corpus from precomputed score files
// plus locally computed WER and phonetic channels, then applies the
// integrated metric.

use std::error::Error;
use std::path::Path;

use asr_intelligibility::phonetic::Lexicon;
use asr_intelligibility::scorer::{load_score_files, Assembler};
use asr_intelligibility::{integrated_score, load_corpus, Weights};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let demo = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let corpus = load_corpus(demo.join("corpus.jsonl"))?;
    // Later files override earlier ones channel by channel.
    let files = load_score_files(&[demo.join("scores.jsonl"), demo.join("extras.jsonl")])?;
    let assembler = Assembler::new(files, Lexicon::bundled());
    let weights = Weights::new(0.40, 0.28, 0.32)?;

    println!("{:<18} {:>6} {:>6} {:>6} {:>6} {:>7} {:>10}", "id", "WER", "NLI", "BERT", "PsimII", "Bleurt", "integrated");
    let mut best = (String::new(), f64::MIN);
    for record in corpus.iter().take(8) {
        let scored = assembler.assemble(record)?;
        let v = &scored.scores;
        let integrated = integrated_score(&weights, v);
        println!(
            "{:<18} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>7.3} {:>10.4}",
            record.id,
            v.wer,
            v.s_nli,
            v.s_sem,
            v.s_phon,
            v.extras.get("bleurt").copied().unwrap_or(f64::NAN),
            integrated
        );
        if integrated > best.1 {
            best = (record.id.clone(), integrated);
        }
    }
    println!("best of the first eight: {} ({:.4})", best.0, best.1);

    let corrected = assembler.assemble_corrected(&corpus[0]).ok_or("demo records carry corrections")??;
    println!("{} corrected: NLI {:.3}, WER {:.3}", corpus[0].id, corrected.scores.s_nli, corrected.scores.wer);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
