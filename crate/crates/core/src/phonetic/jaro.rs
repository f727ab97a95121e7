//! Jaro and Jaro-Winkler similarity over Unicode scalar values.

use super::PhoneticError;

pub const DEFAULT_PREFIX_SCALE: f64 = 0.1;
pub const DEFAULT_MAX_PREFIX: usize = 4;

pub fn jaro(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    jaro_chars(&a, &b)
}

fn jaro_chars(a: &[char], b: &[char]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_matched = vec![false; a.len()];
    let mut b_matched = vec![false; b.len()];
    let mut matches = 0usize;
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_matched[j] && b[j] == *ca {
                a_matched[i] = true;
                b_matched[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }

    let a_seq = a.iter().zip(&a_matched).filter(|(_, m)| **m).map(|(c, _)| c);
    let b_seq = b.iter().zip(&b_matched).filter(|(_, m)| **m).map(|(c, _)| c);
    let half_transpositions = a_seq.zip(b_seq).filter(|(x, y)| x != y).count();

    let m = matches as f64;
    let t = (half_transpositions / 2) as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro-Winkler with the conventional parameters (0.1, 4).
pub fn jaro_winkler(a: &str, b: &str) -> f64 {
    jaro_winkler_with(a, b, DEFAULT_PREFIX_SCALE, DEFAULT_MAX_PREFIX)
        .expect("default parameters are in range")
}

/// `jaro + l * prefix_scale * (1 - jaro)` with `l` the common prefix length
/// capped at `max_prefix`. No boost threshold is applied.
pub fn jaro_winkler_with(
    a: &str,
    b: &str,
    prefix_scale: f64,
    max_prefix: usize,
) -> Result<f64, PhoneticError> {
    if !(0.0..=0.25).contains(&prefix_scale) {
        return Err(PhoneticError::PrefixScale(prefix_scale));
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let base = jaro_chars(&a, &b);
    let prefix = a
        .iter()
        .zip(&b)
        .take(max_prefix)
        .take_while(|(x, y)| x == y)
        .count();
    Ok(base + prefix as f64 * prefix_scale * (1.0 - base))
}
