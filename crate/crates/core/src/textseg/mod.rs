//! Mixed Thai/Latin tokenization.
//!
//! Thai has no spaces between words, so Thai runs are split by dictionary
//! maximal matching. Everything else is split by script and character class.
//! Tokens are the unit for WER, BLEU, CS F1 and chunk budgets.

mod chunk;
mod dict;
mod tokenize;

pub use chunk::{chunk, validate_alignment, AlignmentVerdict, Chunk, DEFAULT_MAX_TOKENS};
pub use dict::{Dictionary, SegmenterConfig, TokenUnit};
pub use tokenize::{english_tokens, tokenize, Token, TokenClass};

pub(crate) use tokenize::is_thai;

#[derive(Debug, thiserror::Error)]
pub enum TextSegError {
    #[error("dictionary is empty")]
    EmptyDictionary,
    #[error("max_word_len {requested} is shorter than the longest dictionary entry ({longest})")]
    MaxWordLenTooSmall { requested: usize, longest: usize },
    #[error("chunk budget must be at least 1")]
    ZeroChunkBudget,
    #[error("token {token:?} costs {cost} units, over the chunk budget of {max_tokens}")]
    SingleTokenTooLong {
        token: String,
        cost: usize,
        max_tokens: usize,
    },
    #[error("failed to read dictionary {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
