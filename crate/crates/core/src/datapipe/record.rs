use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Produced by the mask, translate, restore pipeline.
    Pseudo,
    /// Minted by rephrasing and back-translation.
    Augmented,
    Human,
    ModelOutput,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Pseudo => "pseudo",
            Provenance::Augmented => "augmented",
            Provenance::Human => "human",
            Provenance::ModelOutput => "model_output",
        }
    }
}

/// One English source with its code-switched Thai translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelRecord {
    pub id: String,
    pub source_en: String,
    pub target_cs: String,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scores: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, Value>,
}

impl ParallelRecord {
    pub fn new(
        id: impl Into<String>,
        source_en: impl Into<String>,
        target_cs: impl Into<String>,
        provenance: Provenance,
    ) -> Self {
        Self {
            id: id.into(),
            source_en: source_en.into(),
            target_cs: target_cs.into(),
            provenance,
            scores: BTreeMap::new(),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.meta.insert(key.into(), value.into());
        self
    }

    /// Drafts may have an empty source; set with `meta.draft = true`.
    pub fn is_draft(&self) -> bool {
        self.meta.get("draft").and_then(Value::as_bool).unwrap_or(false)
    }
}
