//! American Soundex with H/W transparency.

use std::fmt;

use super::PhoneticError;

/// Four-character code: a letter followed by three digits in `0..=6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SoundexCode([u8; 4]);

impl SoundexCode {
    pub fn as_str(&self) -> &str {
        // Only ASCII bytes are ever stored.
        std::str::from_utf8(&self.0).expect("ascii")
    }
}

impl fmt::Display for SoundexCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn digit(c: u8) -> Option<u8> {
    match c {
        b'B' | b'F' | b'P' | b'V' => Some(b'1'),
        b'C' | b'G' | b'J' | b'K' | b'Q' | b'S' | b'X' | b'Z' => Some(b'2'),
        b'D' | b'T' => Some(b'3'),
        b'L' => Some(b'4'),
        b'M' | b'N' => Some(b'5'),
        b'R' => Some(b'6'),
        _ => None,
    }
}

/// Encodes one word. Apostrophes and digits are dropped first; any other
/// non-letter makes the word unencodable.
pub fn soundex(word: &str) -> Result<SoundexCode, PhoneticError> {
    let mut letters = Vec::with_capacity(word.len());
    for c in word.chars() {
        match c {
            '\'' | '0'..='9' => {}
            c if c.is_ascii_alphabetic() => letters.push(c.to_ascii_uppercase() as u8),
            _ => return Err(PhoneticError::NotEncodable(word.to_string())),
        }
    }
    let (&first, rest) = letters
        .split_first()
        .ok_or_else(|| PhoneticError::NotEncodable(word.to_string()))?;

    let mut code = [first, b'0', b'0', b'0'];
    let mut len = 1;
    let mut last = digit(first);
    for &c in rest {
        if len == 4 {
            break;
        }
        match c {
            // Transparent: H and W do not separate equal codes.
            b'H' | b'W' => {}
            _ => match digit(c) {
                Some(d) => {
                    if last != Some(d) {
                        code[len] = d;
                        len += 1;
                    }
                    last = Some(d);
                }
                None => last = None,
            },
        }
    }
    Ok(SoundexCode(code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code(w: &str) -> String {
        soundex(w).unwrap().to_string()
    }

    #[test]
    fn classic_vectors() {
        assert_eq!(code("ROBERT"), "R163");
        assert_eq!(code("RUPERT"), "R163");
        assert_eq!(code("A"), "A000");
        assert_eq!(code("ASHCRAFT"), "A261");
        assert_eq!(code("ASHCROFT"), "A261");
        assert_eq!(code("PFISTER"), "P236");
        assert_eq!(code("TYMCZAK"), "T522");
        assert_eq!(code("robert"), "R163");
    }

    #[test]
    fn drops_apostrophes_and_digits() {
        assert_eq!(code("DON'T"), code("DONT"));
        assert_eq!(code("R2D2"), code("RD"));
    }

    #[test]
    fn rejects_unencodable_words() {
        assert!(soundex("").is_err());
        assert!(soundex("123").is_err());
        assert!(soundex("'").is_err());
        assert!(soundex("CAFÉ").is_err());
    }

    proptest! {
        #[test]
        fn output_shape(word in "[A-Za-z'0-9]{0,12}") {
            if let Ok(c) = soundex(&word) {
                let s = c.to_string();
                let b = s.as_bytes();
                prop_assert_eq!(b.len(), 4);
                prop_assert!(b[0].is_ascii_uppercase());
                prop_assert!(b[1..].iter().all(|d| (b'0'..=b'6').contains(d)));
            } else {
                prop_assert!(!word.chars().any(|c| c.is_ascii_alphabetic()));
            }
        }
    }
}
