//! CMU-format pronunciation lexicon and dictionary G2P with letter fallback.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use super::PhoneticError;

/// The 39 stress-free ARPAbet symbols.
pub const ARPABET: [&str; 39] = [
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH", "EH", "ER", "EY", "F", "G", "HH",
    "IH", "IY", "JH", "K", "L", "M", "N", "NG", "OW", "OY", "P", "R", "S", "SH", "T", "TH", "UH",
    "UW", "V", "W", "Y", "Z", "ZH",
];

const BUNDLED: &str = include_str!("../../data/lexicon.dict");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phone {
    Arpabet(&'static str),
    /// Out-of-vocabulary spelling: one symbol per letter or digit.
    Letter(char),
    WordBoundary,
}

impl fmt::Display for Phone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phone::Arpabet(s) => f.write_str(s),
            Phone::Letter(c) => write!(f, "{c}"),
            Phone::WordBoundary => f.write_str("#"),
        }
    }
}

fn arpabet(symbol: &str) -> Option<&'static str> {
    ARPABET.iter().copied().find(|s| *s == symbol)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeSeq {
    pub phones: Vec<Phone>,
    /// True when the word was not in the lexicon and was spelled out.
    pub fallback: bool,
}

impl PhonemeSeq {
    pub fn symbols(&self) -> Vec<String> {
        self.phones.iter().map(Phone::to_string).collect()
    }
}

/// Word → first listed pronunciation, stress digits stripped.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, Vec<Phone>>,
}

impl Lexicon {
    /// Small lexicon shipped with the crate; covers the bundled fixtures.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled lexicon is well-formed")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PhoneticError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| PhoneticError::LexiconLoad {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Parses `WORD  P1 P2 ...` lines. `;;;` lines are comments and `WORD(n)`
    /// alternates are ignored.
    pub fn parse(text: &str) -> Result<Self, PhoneticError> {
        let mut entries = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with(";;;") {
                continue;
            }
            let err = |message: String| PhoneticError::LexiconLoad {
                line: idx + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let word = fields.next().expect("non-empty line has a field");
            if word.ends_with(')') && word.contains('(') {
                continue;
            }
            let phones = fields
                .map(|p| {
                    let bare = p.trim_end_matches(|c: char| c.is_ascii_digit());
                    arpabet(bare)
                        .map(Phone::Arpabet)
                        .ok_or_else(|| err(format!("unknown phone {p:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if phones.is_empty() {
                return Err(err(format!("no pronunciation for {word:?}")));
            }
            entries.entry(word.to_uppercase()).or_insert(phones);
        }
        Ok(Lexicon { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn g2p(&self, word: &str) -> PhonemeSeq {
        match self.entries.get(&word.to_uppercase()) {
            Some(phones) => PhonemeSeq {
                phones: phones.clone(),
                fallback: false,
            },
            None => PhonemeSeq {
                phones: word
                    .chars()
                    .filter(char::is_ascii_alphanumeric)
                    .map(|c| Phone::Letter(c.to_ascii_uppercase()))
                    .collect(),
                fallback: true,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lookups_strip_stress() {
        let lex = Lexicon::bundled();
        let cat = lex.g2p("CAT");
        assert!(!cat.fallback);
        assert_eq!(cat.symbols(), ["K", "AE", "T"]);
        assert_eq!(
            lex.g2p("SEVENTY").symbols(),
            ["S", "EH", "V", "AH", "N", "T", "IY"]
        );
    }

    #[test]
    fn oov_falls_back_to_letters() {
        let seq = Lexicon::bundled().g2p("ZZXQV");
        assert!(seq.fallback);
        assert_eq!(seq.symbols(), ["Z", "Z", "X", "Q", "V"]);
        assert_eq!(seq.phones[0], Phone::Letter('Z'));
        assert_ne!(seq.phones[0], Phone::Arpabet("Z"));
    }

    #[test]
    fn parse_handles_comments_and_alternates() {
        let lex = Lexicon::parse(
            ";;; comment line\nTHE  DH AH0\nTHE(1)  DH AH1\nTHE(2)  DH IY0\n\nREAD  R IY1 D\n",
        )
        .unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.g2p("THE").symbols(), ["DH", "AH"]);
        assert_eq!(lex.g2p("the").symbols(), ["DH", "AH"]);
    }

    #[test]
    fn parse_rejects_unknown_phones() {
        let err = Lexicon::parse("CAT  K AE1 T\nDOG  D QQ G\n").unwrap_err();
        assert!(matches!(err, PhoneticError::LexiconLoad { line: 2, .. }));
        assert!(Lexicon::parse("LONELY\n").is_err());
        assert!(Lexicon::load("/nonexistent/lexicon.dict").is_err());
    }

    #[test]
    fn inventory_has_39_distinct_symbols() {
        let mut v = ARPABET.to_vec();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), 39);
    }
}
