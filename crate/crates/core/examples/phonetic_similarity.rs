// Soundex codes, Jaro-Winkler, and the two phonetic similarity channels:
// Psim I (phoneme edit distance through the lexicon) and Psim II (Jaro-Winkler
// over per-word Soundex codes).

use std::error::Error;

use asr_intelligibility::normalize;
use asr_intelligibility::phonetic::{
    jaro_winkler, psim_phoneme, psim_soundex, soundex, soundex_string, utterance_phones, Lexicon,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for word in ["ROBERT", "RUPERT", "ASHCRAFT", "TYMCZAK", "PFISTER"] {
        println!("{word:<10} {}", soundex(word)?);
    }
    let jw = jaro_winkler("MARTHA", "MARHTA");
    println!("JW(MARTHA, MARHTA) = {jw:.4}");
    assert!((jw - 0.9611).abs() < 1e-4);

    let lexicon = Lexicon::bundled();
    for word in ["CONDITIONING", "DUOLINGO"] {
        let seq = lexicon.g2p(word);
        let how = if seq.fallback { "spelled out" } else { "lexicon" };
        println!("{word:<13} {} ({how})", seq.symbols().join(" "));
    }

    let pairs = [
        ("OPEN DUOLINGO", "OPEN GULAMNBA"),
        ("CALL ROBERT", "CALL RUPERT"),
        ("THE CAT", "THE BAT"),
    ];
    for (reference, hypothesis) in pairs {
        let (r, h) = (normalize(reference), normalize(hypothesis));
        let phones: Vec<String> = utterance_phones(&h, &lexicon).iter().map(|p| p.to_string()).collect();
        println!(
            "{reference:?} vs {hypothesis:?}: PsimI {:.4}  PsimII {:.4}  codes {:?} vs {:?}  phones {}",
            psim_phoneme(&r, &h, &lexicon),
            psim_soundex(&r, &h),
            soundex_string(&r).0,
            soundex_string(&h).0,
            phones.join(" "),
        );
    }

    let duo = psim_soundex(&normalize("OPEN DUOLINGO"), &normalize("OPEN GULAMNBA"));
    assert!((duo - 0.911_111_111_111_111_1).abs() < 1e-12);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
