//! Code-switched English→Thai medical translation toolkit.
//!
//! Two halves:
//!
//! * **Generation**: mask domain keywords, translate the masked text with any
//!   monolingual translator, restore the keywords verbatim, then chunk-align,
//!   augment and filter the resulting parallel corpus ([`masking`],
//!   [`datapipe`], [`backends`]).
//! * **Evaluation**: automated metrics including a code-switching boundary F1
//!   ([`metrics`]), factual band scores and batch Glicko ratings from ranking
//!   surveys ([`rating`], [`survey`]).
//!
//! Thai word segmentation used throughout lives in [`textseg`].

pub mod backends;
pub mod datapipe;
pub mod dryrun;
pub mod masking;
pub mod metrics;
pub mod rating;
pub mod survey;
pub mod textseg;
