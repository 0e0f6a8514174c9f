use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::textseg::{english_tokens, SegmenterConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrfScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl PrfScore {
    pub const PERFECT: PrfScore = PrfScore {
        precision: 1.0,
        recall: 1.0,
        f1: 1.0,
    };
    pub const ZERO: PrfScore = PrfScore {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };
}

/// Precision/recall/F1 of two multisets.
///
/// Both empty scores perfect; exactly one empty scores zero.
pub fn multiset_prf(predicted: &BTreeMap<String, usize>, gold: &BTreeMap<String, usize>) -> PrfScore {
    let pred_total: usize = predicted.values().sum();
    let gold_total: usize = gold.values().sum();
    match (pred_total, gold_total) {
        (0, 0) => return PrfScore::PERFECT,
        (0, _) | (_, 0) => return PrfScore::ZERO,
        _ => {}
    }
    let overlap: usize = predicted
        .iter()
        .map(|(k, &n)| n.min(gold.get(k).copied().unwrap_or(0)))
        .sum();
    let precision = overlap as f64 / pred_total as f64;
    let recall = overlap as f64 / gold_total as f64;
    // Equal to 2PR / (P + R).
    let f1 = 2.0 * overlap as f64 / (pred_total + gold_total) as f64;
    PrfScore {
        precision,
        recall,
        f1,
    }
}

/// Code-switching boundary F1 over the English-token multisets of a
/// hypothesis and a reference.
pub fn cs_f1(hypothesis: &str, reference: &str, cfg: &SegmenterConfig) -> PrfScore {
    multiset_prf(&english_tokens(hypothesis, cfg), &english_tokens(reference, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_sentences_are_perfect() {
        let cfg = SegmenterConfig::default();
        let s = "ผู้ป่วยมี air trapping และ Hyperinflation";
        assert_eq!(cs_f1(s, s, &cfg), PrfScore::PERFECT);
    }

    #[test]
    fn repeated_term_fixture() {
        let cfg = SegmenterConfig::default();
        let s = cs_f1("CT scan ตรวจ scan", "CT ตรวจ scan", &cfg);
        assert_eq!(s.precision, 2.0 / 3.0);
        assert_eq!(s.recall, 1.0);
        assert_eq!(s.f1, 0.8);
    }

    #[test]
    fn empty_vs_nonempty_conventions() {
        let cfg = SegmenterConfig::default();
        assert_eq!(cs_f1("ผู้ป่วยได้รับยา", "ผู้ป่วยได้รับ insulin", &cfg), PrfScore::ZERO);
        assert_eq!(cs_f1("ผู้ป่วย", "ผู้ป่วย", &cfg), PrfScore::PERFECT);
        assert_eq!(cs_f1("insulin", "", &cfg), PrfScore::ZERO);
    }

    #[test]
    fn case_folded() {
        let cfg = SegmenterConfig::default();
        assert_eq!(cs_f1("Insulin", "insulin", &cfg), PrfScore::PERFECT);
    }

    #[test]
    fn disjoint_nonempty_has_zero_f1() {
        let cfg = SegmenterConfig::default();
        assert_eq!(cs_f1("insulin", "heparin", &cfg), PrfScore::ZERO);
    }
}
