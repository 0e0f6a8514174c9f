use std::collections::HashSet;

use serde_json::json;

use super::{DataError, ParallelRecord, Provenance};
use crate::backends::{map_bounded, Rephraser, Translator};

fn rejected(id: &str, reason: &str) -> DataError {
    DataError::AugmentationRejected {
        id: id.to_string(),
        reason: reason.to_string(),
    }
}

/// Rephrases the translation, then back-translates the rephrasing into a
/// new English source. The new record is named `{parent}+aug`.
pub fn augment(
    record: &ParallelRecord,
    rephraser: &dyn Rephraser,
    back_translator: &dyn Translator,
) -> Result<ParallelRecord, DataError> {
    if record.target_cs.trim().is_empty() {
        return Err(rejected(&record.id, "parent target_cs is empty"));
    }
    let rephrased = rephraser.rephrase(&record.target_cs)?;
    if rephrased.text.trim().is_empty() {
        return Err(rejected(&record.id, "empty rephrase"));
    }
    let back = back_translator.translate(&rephrased.text)?;
    if back.text.trim().is_empty() {
        return Err(rejected(&record.id, "empty back-translation"));
    }
    Ok(ParallelRecord::new(
        format!("{}+aug", record.id),
        back.text,
        rephrased.text,
        Provenance::Augmented,
    )
    .with_meta("parent", record.id.clone())
    .with_meta("rephraser", rephraser.name())
    .with_meta("back_translator", back_translator.name())
    .with_meta(
        "latency_ms",
        json!({ "rephrase": rephrased.latency_ms, "back_translate": back.latency_ms }),
    ))
}

/// Augments every record with at most `workers` in flight. Results keep
/// input order. Ids are made unique against `existing` and each other by
/// suffixing a counter (`+aug2`, `+aug3`, ...).
pub fn augment_batch(
    records: &[ParallelRecord],
    existing: &HashSet<String>,
    rephraser: &dyn Rephraser,
    back_translator: &dyn Translator,
    workers: usize,
) -> Vec<Result<ParallelRecord, DataError>> {
    let mut results = map_bounded(records, workers, |r| augment(r, rephraser, back_translator));
    let mut taken: HashSet<String> = existing.clone();
    taken.extend(records.iter().map(|r| r.id.clone()));
    for r in results.iter_mut().flatten() {
        let base = r.id.clone();
        let mut n = 1;
        while taken.contains(&r.id) {
            n += 1;
            r.id = format!("{base}{n}");
        }
        taken.insert(r.id.clone());
    }
    results
}
