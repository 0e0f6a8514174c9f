//! Parallel corpus records, JSON-lines persistence, augmentation by
//! rephrasing and back-translation, score-threshold filtering and corpus
//! statistics.

mod augment;
mod filter;
mod io;
mod record;
mod stats;

pub use augment::{augment, augment_batch};
pub use filter::{filter, FilterOutcome, Quarantined, DEFAULT_THRESHOLD};
pub use io::{load, read_jsonl, save, write_jsonl};
pub use record::{ParallelRecord, Provenance};
pub use stats::{count_sentences, stats, DatasetStats};

use crate::backends::BackendError;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { id: String, line: usize },
    #[error("augmentation of {id} rejected: {reason}")]
    AugmentationRejected { id: String, reason: String },
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}
