use std::collections::HashMap;

use super::{check_lengths, content_tokens, MetricError};
use crate::textseg::SegmenterConfig;

pub const DEFAULT_MAX_N: usize = 4;

/// Matched and total hypothesis n-gram counts per order, plus lengths.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: Vec<usize>,
    pub totals: Vec<usize>,
    pub hyp_len: usize,
    pub ref_len: usize,
}

impl BleuStats {
    fn new(max_n: usize) -> Self {
        Self {
            matches: vec![0; max_n],
            totals: vec![0; max_n],
            hyp_len: 0,
            ref_len: 0,
        }
    }

    fn add(&mut self, other: &BleuStats) {
        for n in 0..self.matches.len() {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
    }

    /// Geometric mean of modified precisions times the brevity penalty.
    /// Orders n ≥ 2 with zero matches use (0 + 1) / (total + 1).
    pub fn score(&self) -> f64 {
        if self.hyp_len == 0 {
            return if self.ref_len == 0 { 1.0 } else { 0.0 };
        }
        if self.matches[0] == 0 {
            return 0.0;
        }
        let max_n = self.matches.len();
        let mut log_sum = 0.0;
        for n in 0..max_n {
            let p = if n > 0 && self.matches[n] == 0 {
                1.0 / (self.totals[n] + 1) as f64
            } else {
                self.matches[n] as f64 / self.totals[n] as f64
            };
            log_sum += p.ln();
        }
        let bp = if self.hyp_len > self.ref_len {
            1.0
        } else {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        };
        bp * (log_sum / max_n as f64).exp()
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

pub fn segment_bleu_stats(hyp: &[String], reference: &[String], max_n: usize) -> BleuStats {
    let mut stats = BleuStats::new(max_n);
    stats.hyp_len = hyp.len();
    stats.ref_len = reference.len();
    for n in 1..=max_n {
        let h = ngram_counts(hyp, n);
        let r = ngram_counts(reference, n);
        stats.totals[n - 1] = h.values().sum();
        stats.matches[n - 1] = h
            .iter()
            .map(|(g, &c)| c.min(r.get(g).copied().unwrap_or(0)))
            .sum();
    }
    stats
}

/// Corpus BLEU over segmenter tokens: n-gram statistics are pooled across
/// segments before precisions are taken.
pub fn bleu<H, R>(
    hypotheses: &[H],
    references: &[R],
    cfg: &SegmenterConfig,
    max_n: usize,
) -> Result<f64, MetricError>
where
    H: AsRef<str>,
    R: AsRef<str>,
{
    check_lengths(hypotheses.len(), references.len())?;
    if max_n == 0 {
        return Err(MetricError::InvalidParameter("max_n must be at least 1"));
    }
    if hypotheses.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let mut total = BleuStats::new(max_n);
    for (h, r) in hypotheses.iter().zip(references) {
        let stats = segment_bleu_stats(
            &content_tokens(h.as_ref(), cfg),
            &content_tokens(r.as_ref(), cfg),
            max_n,
        );
        total.add(&stats);
    }
    Ok(total.score())
}

pub fn sentence_bleu(hypothesis: &str, reference: &str, cfg: &SegmenterConfig) -> f64 {
    segment_bleu_stats(
        &content_tokens(hypothesis, cfg),
        &content_tokens(reference, cfg),
        DEFAULT_MAX_N,
    )
    .score()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_corpus_is_one() {
        let cfg = SegmenterConfig::default();
        let corpus = ["ผู้ป่วยมี fever", "a b c d e", "x"];
        assert_eq!(bleu(&corpus, &corpus, &cfg, 4).unwrap(), 1.0);
    }

    #[test]
    fn no_shared_unigrams_is_zero() {
        let cfg = SegmenterConfig::default();
        assert_eq!(bleu(&["a b c"], &["d e f"], &cfg, 4).unwrap(), 0.0);
    }

    #[test]
    fn hand_counted_four_gram_example() {
        // p1 = 3/4, p2 = 2/3, p3 = 1/2, p4 = (0 + 1) / (1 + 1), BP = 1.
        let cfg = SegmenterConfig::default();
        let got = bleu(&["a b c d"], &["a b c e"], &cfg, 4).unwrap();
        let expected = (0.75f64 * (2.0 / 3.0) * 0.5 * 0.5).powf(0.25);
        assert!((got - expected).abs() < 1e-15, "{got} vs {expected}");
        assert!((got - 0.594_603_557_501_360_5).abs() < 1e-12);
    }

    #[test]
    fn brevity_penalty_applies() {
        let cfg = SegmenterConfig::default();
        let got = bleu(&["a b"], &["a b c d"], &cfg, 1).unwrap();
        assert!((got - (1.0f64 - 2.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        let cfg = SegmenterConfig::default();
        assert!(matches!(
            bleu(&["a"], &["a", "b"], &cfg, 4),
            Err(MetricError::LengthMismatch { .. })
        ));
    }
}
