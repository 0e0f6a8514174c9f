//! Automated translation metrics.
//!
//! All token-level metrics (BLEU, WER, METEOR, CS F1) run over
//! [`crate::textseg`] tokens with whitespace dropped, since Thai is written
//! without spaces between words. CER and chrF work on characters.

mod bleu;
mod chrf;
mod cs_f1;
mod edit;
mod meteor;
mod provider;
mod report;

pub use bleu::{bleu, segment_bleu_stats, sentence_bleu, BleuStats, DEFAULT_MAX_N};
pub use chrf::{
    chrf, corpus_chrf_micro, segment_chrf_stats, sentence_chrf, ChrfStats, DEFAULT_BETA, DEFAULT_CHAR_ORDER,
};
pub use cs_f1::{cs_f1, multiset_prf, PrfScore};
pub use edit::{cer, levenshtein, wer};
pub use meteor::meteor_lite;
pub use provider::{DiceProvider, ScoreError, ScoreProvider};
pub use report::{
    evaluate_corpus, order_free_mean, write_summary_csv, CorpusAggregates, EvaluationReport, MetricValue, SegmentScores,
    SEGMENT_COLUMNS, SUMMARY_COLUMNS,
};

use crate::textseg::{tokenize, SegmenterConfig};

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("hypothesis count {hypotheses} does not match reference count {references}")]
    LengthMismatch { hypotheses: usize, references: usize },
    #[error("reference is empty but the hypothesis is not")]
    EmptyReference,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("segment {index}: {source}")]
    Segment {
        index: usize,
        #[source]
        source: Box<MetricError>,
    },
    #[error(transparent)]
    Score(#[from] ScoreError),
}

pub(crate) fn check_lengths(hypotheses: usize, references: usize) -> Result<(), MetricError> {
    if hypotheses == references {
        Ok(())
    } else {
        Err(MetricError::LengthMismatch {
            hypotheses,
            references,
        })
    }
}

/// Non-whitespace token texts, case preserved.
pub fn content_tokens(text: &str, cfg: &SegmenterConfig) -> Vec<String> {
    tokenize(text, cfg)
        .into_iter()
        .filter(|t| !t.is_whitespace())
        .map(|t| t.text)
        .collect()
}
