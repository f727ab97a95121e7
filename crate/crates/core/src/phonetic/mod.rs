//! Phonetic similarity channels.
//!
//! * Psim I ([`psim_phoneme`]): 1 − normalized Levenshtein distance between
//!   utterance-level phone sequences from dictionary G2P.
//! * Psim II ([`psim_soundex`]): Jaro-Winkler similarity between the
//!   space-joined per-word Soundex codes. This is the phonetic channel of the
//!   integrated metric.

mod jaro;
mod lexicon;
mod soundex;

pub use jaro::{jaro, jaro_winkler, jaro_winkler_with, DEFAULT_MAX_PREFIX, DEFAULT_PREFIX_SCALE};
pub use lexicon::{Lexicon, Phone, PhonemeSeq, ARPABET};
pub use soundex::{soundex, SoundexCode};

use thiserror::Error;

use crate::align;
use crate::corpus::NormalizedText;

#[derive(Debug, Error, PartialEq)]
pub enum PhoneticError {
    #[error("word {0:?} has no letters to encode")]
    NotEncodable(String),
    #[error("prefix scale {0} outside [0, 0.25]")]
    PrefixScale(f64),
    #[error("lexicon line {line}: {message}")]
    LexiconLoad { line: usize, message: String },
}

const CODE_SEPARATOR: char = ' ';

/// Flattens an utterance into phones, with a boundary symbol between words.
pub fn utterance_phones(text: &NormalizedText, lexicon: &Lexicon) -> Vec<Phone> {
    let mut phones = Vec::new();
    for (i, word) in text.tokens().iter().enumerate() {
        if i > 0 {
            phones.push(Phone::WordBoundary);
        }
        phones.extend(lexicon.g2p(word).phones);
    }
    phones
}

/// Psim I.
pub fn psim_phoneme(reference: &NormalizedText, hypothesis: &NormalizedText, lexicon: &Lexicon) -> f64 {
    let r = utterance_phones(reference, lexicon);
    let h = utterance_phones(hypothesis, lexicon);
    let longest = r.len().max(h.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - align::distance(&r, &h) as f64 / longest as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoundexSimilarity {
    pub value: f64,
    /// Words dropped because they had no letters (e.g. bare numerals).
    pub skipped_words: usize,
}

/// Space-joined Soundex codes of every encodable word, plus the skip count.
pub fn soundex_string(text: &NormalizedText) -> (String, usize) {
    let mut codes = Vec::with_capacity(text.len());
    let mut skipped = 0;
    for word in text.tokens() {
        match soundex(word) {
            Ok(code) => codes.push(code.to_string()),
            Err(_) => skipped += 1,
        }
    }
    (codes.join(&CODE_SEPARATOR.to_string()), skipped)
}

/// Psim II with the skip counter.
pub fn psim_soundex_detailed(reference: &NormalizedText, hypothesis: &NormalizedText) -> SoundexSimilarity {
    let (r, skipped_r) = soundex_string(reference);
    let (h, skipped_h) = soundex_string(hypothesis);
    // jaro_winkler already yields 1.0 for two empty strings and 0.0 for one.
    SoundexSimilarity {
        value: jaro_winkler(&r, &h),
        skipped_words: skipped_r + skipped_h,
    }
}

/// Psim II.
pub fn psim_soundex(reference: &NormalizedText, hypothesis: &NormalizedText) -> f64 {
    psim_soundex_detailed(reference, hypothesis).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize;
    use proptest::prelude::*;

    #[test]
    fn psim_phoneme_examples() {
        let lex = Lexicon::bundled();
        let x = normalize("set the air conditioning");
        assert_eq!(psim_phoneme(&x, &x, &lex), 1.0);
        assert_eq!(psim_phoneme(&x, &normalize(""), &lex), 0.0);
        assert_eq!(psim_phoneme(&normalize(""), &normalize(""), &lex), 1.0);
        let v = psim_phoneme(&normalize("CAT"), &normalize("BAT"), &lex);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn word_boundary_costs_an_edit() {
        let lex = Lexicon::bundled();
        // SEVEN TEN vs SEVENTEN (OOV, spelled out) differ; SEVEN TEN with
        // itself does not.
        let split = normalize("SEVEN TEN");
        let merged = normalize("SEVENTEN");
        assert!(psim_phoneme(&split, &merged, &lex) < 1.0);
    }

    #[test]
    fn psim_soundex_examples() {
        let x = normalize("open duolingo");
        assert_eq!(psim_soundex(&x, &x), 1.0);
        assert_eq!(psim_soundex(&normalize("ROBERT"), &normalize("RUPERT")), 1.0);
        assert_eq!(psim_soundex(&normalize(""), &normalize("")), 1.0);
        assert_eq!(psim_soundex(&x, &normalize("")), 0.0);
    }

    #[test]
    fn numerals_are_skipped_and_counted() {
        let s = psim_soundex_detailed(&normalize("room 101"), &normalize("room"));
        assert_eq!(s.skipped_words, 1);
        assert_eq!(s.value, 1.0);
    }

    fn words() -> impl Strategy<Value = NormalizedText> {
        prop::collection::vec("[A-Z]{1,7}|[0-9]{1,3}", 0..6).prop_map(|w| normalize(&w.join(" ")))
    }

    proptest! {
        #[test]
        fn similarities_bounded_and_reflexive(a in words(), b in words()) {
            let lex = Lexicon::bundled();
            let p1 = psim_phoneme(&a, &b, &lex);
            let p2 = psim_soundex(&a, &b);
            prop_assert!((0.0..=1.0).contains(&p1));
            prop_assert!((0.0..=1.0).contains(&p2));
            prop_assert_eq!(p1, psim_phoneme(&b, &a, &lex));
            prop_assert_eq!(psim_phoneme(&a, &a, &lex), 1.0);
            prop_assert_eq!(psim_soundex(&a, &a), 1.0);
        }
    }
}
