// Word error rate with the full alignment, character error rate, and
// macro vs micro corpus aggregation.

use std::error::Error;

use asr_intelligibility::align::{cer, wer_text};
use asr_intelligibility::{corpus_wer, edit_distance, normalize, Aggregation, EditOp};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let reference = "Set the air condition-ditioning to sev seventy eight";
    let hypothesis = "set the air conditioning conditi conditioning to seeseventy se e ee seent eigeight";

    let r = normalize(reference);
    let h = normalize(hypothesis);
    let alignment = edit_distance(r.tokens(), h.tokens());
    for op in &alignment.ops {
        let line = match *op {
            EditOp::Match { ref_index, .. } => format!("  = {}", r.tokens()[ref_index]),
            EditOp::Substitute { ref_index, hyp_index } => {
                format!("  S {} -> {}", r.tokens()[ref_index], h.tokens()[hyp_index])
            }
            EditOp::Delete { ref_index } => format!("  D {}", r.tokens()[ref_index]),
            EditOp::Insert { hyp_index } => format!("  I {}", h.tokens()[hyp_index]),
        };
        println!("{line}");
    }

    let result = wer_text(reference, hypothesis)?;
    println!(
        "WER {:.3} (S={} I={} D={} over {} reference words)",
        result.wer, result.substitutions, result.insertions, result.deletions, result.ref_len
    );
    assert_eq!(result.wer, 1.0);

    // WER is not clamped: a hallucinated correction can exceed 1.
    let hallucinated = wer_text("OPEN DUOLINGO", "OPEN GULAMNBA CORRECTED TEXT OPEN GYM NBA")?;
    println!("hallucinated correction WER {:.1}", hallucinated.wer);
    assert_eq!(hallucinated.wer, 3.0);

    let c = cer("call robert", "call rupert")?;
    println!("CER {:.3}", c.wer);

    let results = [wer_text("A B C D", "A B C X")?, wer_text("A", "B")?];
    let macro_wer = corpus_wer(&results, Aggregation::Macro)?;
    let micro_wer = corpus_wer(&results, Aggregation::Micro)?;
    println!("corpus WER macro {macro_wer:.3}, micro {micro_wer:.3}");
    assert!((macro_wer - 0.625).abs() < 1e-12);
    assert!((micro_wer - 0.4).abs() < 1e-12);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
