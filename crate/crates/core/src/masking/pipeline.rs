use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    apply_mask, parse_annotation, realign_spans, restore_mask, MaskedText, MaskingError, RecoveryPolicy,
    RecoveryStatus,
};
use crate::backends::{Annotator, Translator};
use crate::datapipe::{ParallelRecord, Provenance};

/// Output of annotating and masking one text, before translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskStep {
    pub id: String,
    pub masked: MaskedText,
    pub annotator: String,
    pub latency_ms: u64,
    pub cache_hit: bool,
    /// `{reason, raw}` when the annotation could not be parsed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation_error: Option<Value>,
    /// Tagged surfaces not found in the original text.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unaligned: Vec<String>,
}

/// Annotates `text` and swaps the tagged keywords for placeholders.
///
/// A malformed annotation falls back to masking nothing; the reason and raw
/// payload are kept in `annotation_error`.
pub fn mask_text(id: &str, text: &str, annotator: &dyn Annotator) -> Result<MaskStep, MaskingError> {
    let annotated = annotator.annotate(text)?;
    let mut annotation_error = None;
    let mut unaligned = Vec::new();
    let spans = match parse_annotation(&annotated.text) {
        Ok((plain, spans)) => {
            let (kept, dropped) = realign_spans(text, &plain, spans);
            unaligned = dropped.into_iter().map(|s| s.surface).collect();
            kept
        }
        Err(MaskingError::MalformedAnnotation { reason, raw }) => {
            tracing::warn!(id, %reason, raw = %raw, "malformed annotation, translating without keywords");
            annotation_error = Some(json!({ "reason": reason, "raw": raw }));
            Vec::new()
        }
        Err(e) => return Err(e),
    };
    Ok(MaskStep {
        id: id.to_string(),
        masked: apply_mask(text, &spans)?,
        annotator: annotator.name().to_string(),
        latency_ms: annotated.latency_ms,
        cache_hit: annotated.cache_hit,
        annotation_error,
        unaligned,
    })
}

/// Translates a masked text and restores its keywords.
pub fn translate_masked(
    step: &MaskStep,
    translator: &dyn Translator,
    policy: RecoveryPolicy,
) -> Result<ParallelRecord, MaskingError> {
    let masked = &step.masked;
    let translated = translator.translate(&masked.masked)?;
    let restored = restore_mask(&translated.text, masked, policy)?;

    let mut meta = serde_json::Map::new();
    if let Some(e) = &step.annotation_error {
        meta.insert("annotation_error".into(), e.clone());
    }
    if !step.unaligned.is_empty() {
        meta.insert("annotation_unaligned".into(), json!(step.unaligned));
    }
    let keywords: Vec<Value> = masked
        .spans
        .iter()
        .map(|s| json!({ "surface": s.surface, "category": s.category }))
        .collect();
    let recoveries: Vec<Value> = restored
        .report
        .iter()
        .filter(|r| r.status != RecoveryStatus::Exact || r.occurrences != 1)
        .map(|r| serde_json::to_value(r).expect("recovery serializes"))
        .collect();
    meta.insert("keyword_count".into(), json!(keywords.len()));
    meta.insert("keywords".into(), Value::Array(keywords));
    if !recoveries.is_empty() {
        meta.insert("recovery".into(), Value::Array(recoveries));
    }
    meta.insert("annotator".into(), json!(step.annotator));
    meta.insert("translator".into(), json!(translator.name()));
    meta.insert(
        "latency_ms".into(),
        json!({ "annotate": step.latency_ms, "translate": translated.latency_ms }),
    );
    meta.insert(
        "cache_hits".into(),
        json!(u8::from(step.cache_hit) + u8::from(translated.cache_hit)),
    );

    let mut record = ParallelRecord::new(step.id.clone(), masked.original.clone(), restored.text, Provenance::Pseudo);
    record.meta = meta.into_iter().collect();
    Ok(record)
}

/// Annotate, mask, translate, restore.
pub fn pseudo_cs_translate(
    id: &str,
    text: &str,
    annotator: &dyn Annotator,
    translator: &dyn Translator,
    policy: RecoveryPolicy,
) -> Result<ParallelRecord, MaskingError> {
    translate_masked(&mask_text(id, text, annotator)?, translator, policy)
}
