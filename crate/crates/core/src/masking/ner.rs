use std::collections::BTreeMap;
use std::fmt;

use crate::metrics::{multiset_prf, order_free_mean, PrfScore};

fn fold<S: AsRef<str>>(words: &[S]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for w in words {
        *m.entry(w.as_ref().to_lowercase()).or_insert(0) += 1;
    }
    m
}

/// Keyword detection quality against gold keywords, as case-folded multisets.
pub fn ner_score<S: AsRef<str>>(predicted: &[S], gold: &[S]) -> PrfScore {
    multiset_prf(&fold(predicted), &fold(gold))
}

/// Per-document scores of one annotator, macro-averaged.
#[derive(Debug, Clone, PartialEq)]
pub struct NerReport {
    pub annotator: String,
    pub documents: usize,
    pub mean: PrfScore,
}

impl NerReport {
    pub fn from_documents(annotator: impl Into<String>, scores: &[PrfScore]) -> Self {
        let n = scores.len();
        let avg = |f: fn(&PrfScore) -> f64| {
            if n == 0 {
                0.0
            } else {
                order_free_mean(scores.iter().map(f).collect())
            }
        };
        Self {
            annotator: annotator.into(),
            documents: n,
            mean: PrfScore {
                precision: avg(|s| s.precision),
                recall: avg(|s| s.recall),
                f1: avg(|s| s.f1),
            },
        }
    }

    pub const HEADER: &'static str = "Model | CS F1 | Recall | Precision";
}

/// `annotator | f1 | recall | precision`, two decimals.
impl fmt::Display for NerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {:.2} | {:.2} | {:.2}",
            self.annotator, self.mean.f1, self.mean.recall, self.mean.precision
        )
    }
}
