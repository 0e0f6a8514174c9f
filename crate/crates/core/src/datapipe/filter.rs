use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DataError, ParallelRecord};
use crate::metrics::{ScoreError, ScoreProvider};

pub const DEFAULT_THRESHOLD: f64 = 0.6;

/// A record the provider could not score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quarantined {
    pub record: ParallelRecord,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FilterOutcome {
    /// Records scoring at or above the threshold, in input order.
    pub kept: Vec<ParallelRecord>,
    pub rejected: Vec<ParallelRecord>,
    pub quarantined: Vec<Quarantined>,
}

/// Keeps records whose score is at least `threshold`.
///
/// Scores are stored in `record.scores` under the provider id and reused
/// when already present, so refiltering is cheap and idempotent. Records are
/// scored source-against-translation.
pub fn filter(
    dataset: &[ParallelRecord],
    provider: &dyn ScoreProvider,
    threshold: f64,
) -> Result<FilterOutcome, DataError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(DataError::InvalidThreshold(threshold));
    }
    let key = provider.id().to_string();
    let scored: Vec<(ParallelRecord, Result<f64, ScoreError>)> = dataset
        .par_iter()
        .map(|r| {
            let score = match r.scores.get(&key) {
                Some(&s) => Ok(s),
                None => provider.score(&r.source_en, &r.target_cs, None),
            };
            let score = score.and_then(|s| {
                if (0.0..=1.0).contains(&s) {
                    Ok(s)
                } else {
                    Err(ScoreError::OutOfRange {
                        provider: key.clone(),
                        value: s,
                    })
                }
            });
            (r.clone(), score)
        })
        .collect();

    let mut out = FilterOutcome::default();
    for (mut record, score) in scored {
        match score {
            Ok(s) => {
                record.scores.insert(key.clone(), s);
                if s >= threshold {
                    out.kept.push(record);
                } else {
                    out.rejected.push(record);
                }
            }
            Err(e) => {
                tracing::warn!(id = %record.id, error = %e, "record quarantined");
                out.quarantined.push(Quarantined {
                    record,
                    error: e.to_string(),
                });
            }
        }
    }
    Ok(out)
}
