//! Keyword masking for code-switched translation.
//!
//! An annotator tags domain keywords, [`apply_mask`] swaps each for a
//! `[[K{n}]]` placeholder, a monolingual translator handles the rest, and
//! [`restore_mask`] puts the keywords back verbatim. Translators sometimes
//! garble placeholders, so restoring tolerates the [`Corruption`] forms
//! marked recoverable.

mod annotation;
mod mask;
mod ner;
mod pipeline;

use serde::{Deserialize, Serialize};

pub use annotation::{parse_annotation, realign_spans, render_annotation};
pub use mask::{
    apply_mask, placeholder, restore_mask, Corruption, MaskedText, OnLost, Recovery, RecoveryPolicy,
    RecoveryStatus, Restored, LOST_MARKER,
};
pub use ner::{ner_score, NerReport};
pub use pipeline::{mask_text, pseudo_cs_translate, translate_masked, MaskStep};

use crate::backends::BackendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Patho,
    Pharm,
    Taxo,
    Anato,
    Chem,
    Med,
    Other,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Patho,
        Category::Pharm,
        Category::Taxo,
        Category::Anato,
        Category::Chem,
        Category::Med,
        Category::Other,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Category::Patho => "patho",
            Category::Pharm => "pharm",
            Category::Taxo => "taxo",
            Category::Anato => "anato",
            Category::Chem => "chem",
            Category::Med => "med",
            Category::Other => "other",
        }
    }

    /// Case-insensitive; unrecognised names give `Other`.
    pub fn from_tag(name: &str) -> Self {
        Category::ALL
            .into_iter()
            .find(|c| c.tag().eq_ignore_ascii_case(name))
            .unwrap_or(Category::Other)
    }
}

/// A keyword located by character offsets (half-open).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordSpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub category: Category,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum MaskingError {
    #[error("malformed annotation ({reason})")]
    MalformedAnnotation { reason: String, raw: String },
    #[error("span {start}..{end} is invalid for text of {len} characters")]
    InvalidSpan { start: usize, end: usize, len: usize },
    #[error("span surface {expected:?} does not match text {actual:?}")]
    SurfaceMismatch { expected: String, actual: String },
    #[error("spans {first:?} and {second:?} overlap")]
    OverlappingSpans { first: (usize, usize), second: (usize, usize) },
    #[error("text already contains placeholder-like literal {0:?}")]
    ReservedLiteral(String),
    #[error("placeholders lost in translation: {0:?}")]
    PlaceholderLost(Vec<usize>),
    #[error(transparent)]
    Backend(#[from] BackendError),
}
