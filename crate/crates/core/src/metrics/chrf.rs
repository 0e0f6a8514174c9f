use std::collections::HashMap;

use super::{check_lengths, MetricError};

pub const DEFAULT_CHAR_ORDER: usize = 6;
pub const DEFAULT_BETA: f64 = 2.0;

/// Per-order character n-gram counts for one or more segments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChrfStats {
    pub hyp: Vec<usize>,
    pub reference: Vec<usize>,
    pub matches: Vec<usize>,
}

impl ChrfStats {
    fn new(order: usize) -> Self {
        Self {
            hyp: vec![0; order],
            reference: vec![0; order],
            matches: vec![0; order],
        }
    }

    fn add(&mut self, other: &ChrfStats) {
        for n in 0..self.hyp.len() {
            self.hyp[n] += other.hyp[n];
            self.reference[n] += other.reference[n];
            self.matches[n] += other.matches[n];
        }
    }

    /// F-beta of precision and recall averaged over the orders for which
    /// both sides have at least one n-gram.
    pub fn score(&self, beta: f64) -> f64 {
        let mut p_sum = 0.0;
        let mut r_sum = 0.0;
        let mut orders = 0usize;
        for n in 0..self.hyp.len() {
            if self.hyp[n] > 0 && self.reference[n] > 0 {
                p_sum += self.matches[n] as f64 / self.hyp[n] as f64;
                r_sum += self.matches[n] as f64 / self.reference[n] as f64;
                orders += 1;
            }
        }
        if orders == 0 {
            let both_empty = self.hyp.first() == Some(&0) && self.reference.first() == Some(&0);
            return if both_empty { 1.0 } else { 0.0 };
        }
        let p = p_sum / orders as f64;
        let r = r_sum / orders as f64;
        let b2 = beta * beta;
        let denom = b2 * p + r;
        if denom == 0.0 {
            0.0
        } else {
            (1.0 + b2) * p * r / denom
        }
    }
}

fn char_ngrams(chars: &[char], n: usize) -> HashMap<&[char], usize> {
    let mut counts = HashMap::new();
    if chars.len() >= n {
        for w in chars.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

pub fn segment_chrf_stats(hypothesis: &str, reference: &str, order: usize) -> ChrfStats {
    let h: Vec<char> = hypothesis.chars().filter(|c| !c.is_whitespace()).collect();
    let r: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
    let mut stats = ChrfStats::new(order);
    for n in 1..=order {
        let hc = char_ngrams(&h, n);
        let rc = char_ngrams(&r, n);
        stats.hyp[n - 1] = h.len().saturating_sub(n - 1);
        stats.reference[n - 1] = r.len().saturating_sub(n - 1);
        stats.matches[n - 1] = hc
            .iter()
            .map(|(g, &c)| c.min(rc.get(g).copied().unwrap_or(0)))
            .sum();
    }
    stats
}

pub fn sentence_chrf(hypothesis: &str, reference: &str) -> f64 {
    segment_chrf_stats(hypothesis, reference, DEFAULT_CHAR_ORDER).score(DEFAULT_BETA)
}

/// Macro chrF: the mean of per-segment scores.
pub fn chrf<H, R>(hypotheses: &[H], references: &[R], order: usize, beta: f64) -> Result<f64, MetricError>
where
    H: AsRef<str>,
    R: AsRef<str>,
{
    check_lengths(hypotheses.len(), references.len())?;
    if order == 0 || beta <= 0.0 {
        return Err(MetricError::InvalidParameter("chrF needs order >= 1 and beta > 0"));
    }
    if hypotheses.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let sum: f64 = hypotheses
        .iter()
        .zip(references)
        .map(|(h, r)| segment_chrf_stats(h.as_ref(), r.as_ref(), order).score(beta))
        .sum();
    Ok(sum / hypotheses.len() as f64)
}

/// Micro chrF: n-gram counts pooled over the corpus before scoring.
pub fn corpus_chrf_micro<H, R>(
    hypotheses: &[H],
    references: &[R],
    order: usize,
    beta: f64,
) -> Result<f64, MetricError>
where
    H: AsRef<str>,
    R: AsRef<str>,
{
    check_lengths(hypotheses.len(), references.len())?;
    if order == 0 || beta <= 0.0 {
        return Err(MetricError::InvalidParameter("chrF needs order >= 1 and beta > 0"));
    }
    let mut total = ChrfStats::new(order);
    for (h, r) in hypotheses.iter().zip(references) {
        total.add(&segment_chrf_stats(h.as_ref(), r.as_ref(), order));
    }
    Ok(total.score(beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_one() {
        let corpus = ["ผู้ป่วยมี fever", "abc", "a"];
        assert_eq!(chrf(&corpus, &corpus, 6, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_is_zero() {
        assert_eq!(chrf(&["abc"], &["xyz"], 6, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn abcd_vs_abce() {
        // n=1: 3/4, n=2: 2/3, n=3: 1/2, n=4: 0/1; orders 5 and 6 are empty.
        let avg = (0.75 + 2.0 / 3.0 + 0.5 + 0.0) / 4.0;
        let got = sentence_chrf("abcd", "abce");
        assert!((got - avg).abs() < 1e-15, "{got} vs {avg}");
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(sentence_chrf("a b c", "abc"), 1.0);
    }

    #[test]
    fn empty_segments() {
        assert_eq!(sentence_chrf("", ""), 1.0);
        assert_eq!(sentence_chrf("a", ""), 0.0);
        assert_eq!(sentence_chrf("", "a"), 0.0);
        assert!(matches!(chrf::<&str, &str>(&[], &[], 6, 2.0), Err(MetricError::EmptyCorpus)));
    }
}
