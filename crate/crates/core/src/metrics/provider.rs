use std::collections::BTreeMap;

use crate::textseg::{tokenize, SegmenterConfig, TokenClass};

#[derive(Debug, Clone, thiserror::Error)]
pub enum ScoreError {
    #[error("score provider {provider} failed: {message}")]
    Failed { provider: String, message: String },
    #[error("score provider {provider} returned {value}, outside [0, 1]")]
    OutOfRange { provider: String, value: f64 },
}

/// A semantic similarity scorer (COMET or similar) supplied from outside.
///
/// `reference` is optional so quality-estimation (source-only) and
/// reference-based wirings both fit.
pub trait ScoreProvider: Send + Sync {
    /// Stable identity recorded in reports and used as the score key.
    fn id(&self) -> &str;

    fn score(&self, source: &str, hypothesis: &str, reference: Option<&str>) -> Result<f64, ScoreError>;
}

impl<P: ScoreProvider + ?Sized> ScoreProvider for &P {
    fn id(&self) -> &str {
        (**self).id()
    }

    fn score(&self, source: &str, hypothesis: &str, reference: Option<&str>) -> Result<f64, ScoreError> {
        (**self).score(source, hypothesis, reference)
    }
}

/// Deterministic stand-in for a neural scorer: Dice coefficient between
/// case-folded content-token multisets of the hypothesis and the reference
/// (or the source when no reference is given).
#[derive(Debug, Clone, Default)]
pub struct DiceProvider {
    cfg: SegmenterConfig,
}

impl DiceProvider {
    pub fn new(cfg: SegmenterConfig) -> Self {
        Self { cfg }
    }

    fn bag(&self, text: &str) -> BTreeMap<String, usize> {
        let mut bag = BTreeMap::new();
        for tok in tokenize(text, &self.cfg) {
            if !matches!(tok.class, TokenClass::Whitespace | TokenClass::Punct) {
                *bag.entry(tok.text.to_lowercase()).or_insert(0) += 1;
            }
        }
        bag
    }

    pub fn dice(&self, a: &str, b: &str) -> f64 {
        let a = self.bag(a);
        let b = self.bag(b);
        let total: usize = a.values().sum::<usize>() + b.values().sum::<usize>();
        if total == 0 {
            return 1.0;
        }
        let overlap: usize = a
            .iter()
            .map(|(k, &n)| n.min(b.get(k).copied().unwrap_or(0)))
            .sum();
        2.0 * overlap as f64 / total as f64
    }
}

impl ScoreProvider for DiceProvider {
    fn id(&self) -> &str {
        "dice"
    }

    fn score(&self, source: &str, hypothesis: &str, reference: Option<&str>) -> Result<f64, ScoreError> {
        Ok(self.dice(hypothesis, reference.unwrap_or(source)))
    }
}
