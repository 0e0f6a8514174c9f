use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::RatingError;
use crate::metrics::order_free_mean;

/// One evaluator's band scores, keyed by system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactualScoreSheet {
    pub evaluator_id: String,
    pub scores: BTreeMap<String, Vec<f64>>,
}

/// Allowed score values: `min..=max` in steps of `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBand {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for ScoreBand {
    fn default() -> Self {
        Self {
            min: 1.0,
            max: 7.0,
            step: 0.5,
        }
    }
}

impl ScoreBand {
    /// The 1-7 band extended down to 0, for sheets that record "no usable
    /// output" as 0.
    pub fn with_zero() -> Self {
        Self {
            min: 0.0,
            ..Self::default()
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        let k = (v - self.min) / self.step;
        v.is_finite() && v >= self.min && v <= self.max && (k - k.round()).abs() < 1e-9
    }
}

impl FactualScoreSheet {
    pub fn new(evaluator_id: impl Into<String>) -> Self {
        Self {
            evaluator_id: evaluator_id.into(),
            scores: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, system_id: impl Into<String>, score: f64) -> &mut Self {
        self.scores.entry(system_id.into()).or_default().push(score);
        self
    }

    pub fn validate(&self, band: &ScoreBand) -> Result<(), RatingError> {
        for (system, scores) in &self.scores {
            if scores.is_empty() {
                return Err(RatingError::EmptyScores {
                    evaluator: self.evaluator_id.clone(),
                    system: system.clone(),
                });
            }
            if let Some(&bad) = scores.iter().find(|&&s| !band.contains(s)) {
                return Err(RatingError::ScoreOutOfBand {
                    evaluator: self.evaluator_id.clone(),
                    system: system.clone(),
                    value: bad,
                });
            }
        }
        Ok(())
    }
}

/// Median; the mean of the middle two for even counts.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Per system: the mean over evaluators of each evaluator's median score.
///
/// With `strict`, every sheet must list the same systems.
pub fn factual_aggregate(
    sheets: &[FactualScoreSheet],
    band: &ScoreBand,
    strict: bool,
) -> Result<BTreeMap<String, f64>, RatingError> {
    for s in sheets {
        s.validate(band)?;
    }
    if strict {
        let all: BTreeSet<&String> = sheets.iter().flat_map(|s| s.scores.keys()).collect();
        for s in sheets {
            if let Some(missing) = all.iter().find(|sys| !s.scores.contains_key(**sys)) {
                return Err(RatingError::MissingSystem {
                    evaluator: s.evaluator_id.clone(),
                    system: (*missing).clone(),
                });
            }
        }
    }
    let mut medians: BTreeMap<&String, Vec<f64>> = BTreeMap::new();
    for s in sheets {
        for (system, scores) in &s.scores {
            medians.entry(system).or_default().push(median(scores));
        }
    }
    Ok(medians
        .into_iter()
        .map(|(system, m)| (system.clone(), order_free_mean(m)))
        .collect())
}

/// Reads sheets from CSV with columns `evaluator_id,system_id,score`, one
/// row per score.
pub fn read_sheets_csv<R: Read>(reader: R) -> Result<Vec<FactualScoreSheet>, RatingError> {
    #[derive(Deserialize)]
    struct Row {
        evaluator_id: String,
        system_id: String,
        score: f64,
    }
    let mut by_eval: BTreeMap<String, FactualScoreSheet> = BTreeMap::new();
    for (i, row) in csv::Reader::from_reader(reader).deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| RatingError::Parse(format!("row {}: {e}", i + 1)))?;
        by_eval
            .entry(row.evaluator_id.clone())
            .or_insert_with(|| FactualScoreSheet::new(row.evaluator_id))
            .add(row.system_id, row.score);
    }
    Ok(by_eval.into_values().collect())
}
