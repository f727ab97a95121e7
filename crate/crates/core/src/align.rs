//! Levenshtein alignment and word/character error rates.
//!
//! Costs are unit for substitution, insertion and deletion. When several
//! backtraces reach the same minimal cost the alignment prefers, at each step
//! from the end, Match, then Substitute, then Delete, then Insert.

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{normalize, NormalizedText};

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("reference is empty")]
    EmptyReference,
    #[error("no utterances to aggregate")]
    EmptyCorpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EditOp {
    Match { ref_index: usize, hyp_index: usize },
    Substitute { ref_index: usize, hyp_index: usize },
    /// Reference token with no hypothesis counterpart.
    Delete { ref_index: usize },
    /// Hypothesis token with no reference counterpart.
    Insert { hyp_index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Alignment {
    pub ops: Vec<EditOp>,
    pub distance: usize,
}

impl Alignment {
    pub fn substitutions(&self) -> usize {
        self.count(|op| matches!(op, EditOp::Substitute { .. }))
    }

    pub fn insertions(&self) -> usize {
        self.count(|op| matches!(op, EditOp::Insert { .. }))
    }

    pub fn deletions(&self) -> usize {
        self.count(|op| matches!(op, EditOp::Delete { .. }))
    }

    fn count(&self, pred: impl Fn(&EditOp) -> bool) -> usize {
        self.ops.iter().filter(|op| pred(op)).count()
    }

    /// Rebuilds the hypothesis from the reference by replaying the ops.
    pub fn apply<T: Clone>(&self, reference: &[T], hypothesis: &[T]) -> Vec<T> {
        self.ops
            .iter()
            .filter_map(|op| match *op {
                EditOp::Match { ref_index, .. } => Some(reference[ref_index].clone()),
                EditOp::Substitute { hyp_index, .. } | EditOp::Insert { hyp_index } => {
                    Some(hypothesis[hyp_index].clone())
                }
                EditOp::Delete { .. } => None,
            })
            .collect()
    }
}

/// Edit distance only, in O(min(|a|,|b|)) memory.
pub fn distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, x) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, y) in short.iter().enumerate() {
            let sub = diag + usize::from(x != y);
            diag = row[j + 1];
            row[j + 1] = sub.min(row[j] + 1).min(diag + 1);
        }
    }
    row[short.len()]
}

/// Minimal-cost alignment of `a` (reference) onto `b` (hypothesis).
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> Alignment {
    let (n, m) = (a.len(), b.len());
    let width = m + 1;
    let mut table = vec![0usize; (n + 1) * width];
    for (j, cell) in table.iter_mut().take(width).enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        table[i * width] = i;
        for j in 1..=m {
            let sub = table[(i - 1) * width + j - 1] + usize::from(a[i - 1] != b[j - 1]);
            let del = table[(i - 1) * width + j] + 1;
            let ins = table[i * width + j - 1] + 1;
            table[i * width + j] = sub.min(del).min(ins);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = table[i * width + j];
        if i > 0 && j > 0 {
            let diag = table[(i - 1) * width + j - 1];
            if a[i - 1] == b[j - 1] && diag == here {
                ops.push(EditOp::Match {
                    ref_index: i - 1,
                    hyp_index: j - 1,
                });
                i -= 1;
                j -= 1;
                continue;
            }
            if diag + 1 == here {
                ops.push(EditOp::Substitute {
                    ref_index: i - 1,
                    hyp_index: j - 1,
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && table[(i - 1) * width + j] + 1 == here {
            ops.push(EditOp::Delete { ref_index: i - 1 });
            i -= 1;
        } else {
            ops.push(EditOp::Insert { hyp_index: j - 1 });
            j -= 1;
        }
    }
    ops.reverse();
    Alignment {
        distance: table[n * width + m],
        ops,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WerResult {
    /// Not clamped: insertions can push this above 1.0.
    pub wer: f64,
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
    pub ref_len: usize,
}

impl WerResult {
    pub fn edits(&self) -> usize {
        self.substitutions + self.insertions + self.deletions
    }

    fn from_alignment(alignment: &Alignment, ref_len: usize) -> Self {
        let (s, i, d) = (
            alignment.substitutions(),
            alignment.insertions(),
            alignment.deletions(),
        );
        WerResult {
            wer: (s + i + d) as f64 / ref_len as f64,
            substitutions: s,
            insertions: i,
            deletions: d,
            ref_len,
        }
    }
}

pub fn wer(reference: &NormalizedText, hypothesis: &NormalizedText) -> Result<WerResult, AlignError> {
    if reference.is_empty() {
        return Err(AlignError::EmptyReference);
    }
    let alignment = edit_distance(reference.tokens(), hypothesis.tokens());
    Ok(WerResult::from_alignment(&alignment, reference.len()))
}

/// WER on raw strings, normalizing both sides first.
pub fn wer_text(reference: &str, hypothesis: &str) -> Result<WerResult, AlignError> {
    wer(&normalize(reference), &normalize(hypothesis))
}

/// Character error rate over the normalized texts joined with single spaces.
pub fn cer(reference: &str, hypothesis: &str) -> Result<WerResult, AlignError> {
    let r: Vec<char> = normalize(reference).joined().chars().collect();
    let h: Vec<char> = normalize(hypothesis).joined().chars().collect();
    if r.is_empty() {
        return Err(AlignError::EmptyReference);
    }
    let alignment = edit_distance(&r, &h);
    Ok(WerResult::from_alignment(&alignment, r.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// Mean of per-utterance WER.
    #[default]
    Macro,
    /// Total edits over total reference tokens.
    Micro,
}

pub fn corpus_wer(results: &[WerResult], mode: Aggregation) -> Result<f64, AlignError> {
    if results.is_empty() {
        return Err(AlignError::EmptyCorpus);
    }
    Ok(match mode {
        Aggregation::Macro => results.iter().map(|r| r.wer).sum::<f64>() / results.len() as f64,
        Aggregation::Micro => {
            let edits: usize = results.iter().map(WerResult::edits).sum();
            let total: usize = results.iter().map(|r| r.ref_len).sum();
            edits as f64 / total as f64
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(edit_distance(&t("A B C"), &t("A B C")).distance, 0);
        let one = edit_distance(&t("A B C"), &t("A X C"));
        assert_eq!(one.distance, 1);
        assert_eq!(one.substitutions(), 1);
        let ins = edit_distance::<&str>(&[], &t("A B"));
        assert_eq!(ins.distance, 2);
        assert_eq!(ins.insertions(), 2);
        assert_eq!(edit_distance::<&str>(&[], &[]).distance, 0);
    }

    #[test]
    fn tie_break_prefers_substitution_over_indels() {
        // "A B" -> "B C": Sub+Sub or Del+Ins at cost 2, first step from the end
        // should be a substitution.
        let al = edit_distance(&t("A B"), &t("B C"));
        assert_eq!(al.distance, 2);
        assert_eq!(al.substitutions(), 2);
        // Deletion preferred over insertion when both tie.
        let al = edit_distance(&t("A B"), &t("A"));
        assert_eq!(
            al.ops,
            vec![
                EditOp::Match { ref_index: 0, hyp_index: 0 },
                EditOp::Delete { ref_index: 1 }
            ]
        );
    }

    #[test]
    fn wer_worked_examples() {
        let w = wer_text(
            "SET THE AIR CONDITION DITIONING TO SEV SEVENTY EIGHT",
            "SET THE AIR CONDITIONING CONDITIONING TO SEVENTY EIGHT",
        )
        .unwrap();
        assert_eq!(w.edits(), 3);
        assert_eq!(w.ref_len, 9);
        assert!((w.wer - 1.0 / 3.0).abs() < 1e-12);

        assert_eq!(wer_text("OPEN DUOLINGO", "OPEN GULAMNBA").unwrap().wer, 0.5);
        let w = wer_text("OPEN DUOLINGO", "OPEN GULAMNBA CORRECTED TEXT OPEN GYM NBA").unwrap();
        assert_eq!((w.substitutions, w.insertions, w.deletions), (1, 5, 0));
        assert_eq!(w.wer, 3.0);
    }

    #[test]
    fn wer_rejects_empty_reference() {
        assert_eq!(wer_text("", "A"), Err(AlignError::EmptyReference));
        assert_eq!(wer_text(" ... ", "A"), Err(AlignError::EmptyReference));
    }

    #[test]
    fn cer_examples() {
        assert_eq!(cer("ABC", "ABC").unwrap().wer, 0.0);
        assert!((cer("ABC", "ABD").unwrap().wer - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(cer("AB", "").unwrap().wer, 1.0);
        assert_eq!(cer("", "AB"), Err(AlignError::EmptyReference));
    }

    #[test]
    fn corpus_wer_examples() {
        let r = |edits: usize, ref_len: usize| WerResult {
            wer: edits as f64 / ref_len as f64,
            substitutions: edits,
            insertions: 0,
            deletions: 0,
            ref_len,
        };
        let eq = [r(0, 4), r(4, 4)];
        assert_eq!(corpus_wer(&eq, Aggregation::Macro).unwrap(), 0.5);
        assert_eq!(corpus_wer(&eq, Aggregation::Micro).unwrap(), 0.5);
        let uneq = [r(0, 1), r(9, 9)];
        assert_eq!(corpus_wer(&uneq, Aggregation::Macro).unwrap(), 0.5);
        assert_eq!(corpus_wer(&uneq, Aggregation::Micro).unwrap(), 0.9);
        let single = [r(2, 3)];
        assert_eq!(
            corpus_wer(&single, Aggregation::Macro).unwrap(),
            corpus_wer(&single, Aggregation::Micro).unwrap()
        );
        assert_eq!(corpus_wer(&[], Aggregation::Macro), Err(AlignError::EmptyCorpus));
    }

    fn seq() -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..5, 0..8)
    }

    proptest! {
        #[test]
        fn replay_reconstructs_hypothesis(a in seq(), b in seq()) {
            let al = edit_distance(&a, &b);
            prop_assert_eq!(al.apply(&a, &b), b.clone());
            let non_match = al.ops.iter().filter(|op| !matches!(op, EditOp::Match { .. })).count();
            prop_assert_eq!(al.distance, non_match);
            prop_assert_eq!(al.distance, distance(&a, &b));
        }

        #[test]
        fn distance_is_symmetric(a in seq(), b in seq()) {
            prop_assert_eq!(edit_distance(&a, &b).distance, edit_distance(&b, &a).distance);
        }

        #[test]
        fn triangle_inequality(a in seq(), b in seq(), c in seq()) {
            prop_assert!(distance(&a, &c) <= distance(&a, &b) + distance(&b, &c));
        }

        #[test]
        fn wer_of_self_is_zero(words in prop::collection::vec("[A-Z]{1,6}", 1..10)) {
            let text = normalize(&words.join(" "));
            prop_assert_eq!(wer(&text, &text).unwrap().wer, 0.0);
        }
    }
}
