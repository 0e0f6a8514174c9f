use unicode_normalization::UnicodeNormalization;

use super::{content_tokens, MetricError};
use crate::textseg::SegmenterConfig;

/// Unit-cost Levenshtein distance between two sequences.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

fn error_rate<T: PartialEq>(hyp: &[T], reference: &[T]) -> Result<f64, MetricError> {
    match (reference.len(), hyp.len()) {
        (0, 0) => Ok(0.0),
        (0, _) => Err(MetricError::EmptyReference),
        (n, _) => Ok(levenshtein(hyp, reference) as f64 / n as f64),
    }
}

/// Character error rate over NFC Unicode scalar values.
pub fn cer(hypothesis: &str, reference: &str) -> Result<f64, MetricError> {
    let h: Vec<char> = hypothesis.nfc().collect();
    let r: Vec<char> = reference.nfc().collect();
    error_rate(&h, &r)
}

/// Word error rate over non-whitespace segmenter tokens.
pub fn wer(hypothesis: &str, reference: &str, cfg: &SegmenterConfig) -> Result<f64, MetricError> {
    error_rate(&content_tokens(hypothesis, cfg), &content_tokens(reference, cfg))
}
