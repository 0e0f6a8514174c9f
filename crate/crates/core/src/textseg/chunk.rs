use serde::{Deserialize, Serialize};

use super::{tokenize, SegmenterConfig, TextSegError, TokenUnit};

/// Default chunk budget: strictly fewer than 256 tokens.
pub const DEFAULT_MAX_TOKENS: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub text: String,
    pub token_count: usize,
    pub index: usize,
}

/// Greedy left-to-right packing of tokens into chunks of at most
/// `max_tokens` units. Whitespace costs nothing and trails the chunk it
/// follows, so chunk texts concatenate back to the input.
pub fn chunk(text: &str, cfg: &SegmenterConfig, max_tokens: usize) -> Result<Vec<Chunk>, TextSegError> {
    if max_tokens == 0 {
        return Err(TextSegError::ZeroChunkBudget);
    }
    let mut chunks: Vec<Chunk> = Vec::new();
    let mut current = Chunk {
        text: String::new(),
        token_count: 0,
        index: 0,
    };
    for tok in tokenize(text, cfg) {
        let cost = match (tok.is_whitespace(), cfg.token_unit) {
            (true, _) => 0,
            (false, TokenUnit::Word) => 1,
            (false, TokenUnit::Char) => tok.text.chars().count(),
        };
        if cost > max_tokens {
            return Err(TextSegError::SingleTokenTooLong {
                token: tok.text,
                cost,
                max_tokens,
            });
        }
        if cost > 0 && current.token_count + cost > max_tokens {
            let index = current.index + 1;
            chunks.push(std::mem::replace(
                &mut current,
                Chunk {
                    text: String::new(),
                    token_count: 0,
                    index,
                },
            ));
        }
        current.text.push_str(&tok.text);
        current.token_count += cost;
    }
    if !current.text.is_empty() {
        chunks.push(current);
    }
    Ok(chunks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlignmentVerdict {
    Aligned,
    Mismatch { source: usize, target: usize },
}

impl AlignmentVerdict {
    pub fn is_aligned(&self) -> bool {
        matches!(self, AlignmentVerdict::Aligned)
    }
}

/// Source and target must split into the same number of chunks.
pub fn validate_alignment(source: &[Chunk], target: &[Chunk]) -> AlignmentVerdict {
    if source.len() == target.len() {
        AlignmentVerdict::Aligned
    } else {
        AlignmentVerdict::Mismatch {
            source: source.len(),
            target: target.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn joined(chunks: &[Chunk]) -> String {
        chunks.iter().map(|c| c.text.as_str()).collect()
    }

    #[test]
    fn short_text_is_one_chunk() {
        let text = "one two three four five six seven eight nine ten";
        let chunks = chunk(text, &SegmenterConfig::default(), DEFAULT_MAX_TOKENS).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].token_count, 10);
        assert_eq!(joined(&chunks), text);
    }

    #[test]
    fn six_hundred_words_pack_greedily() {
        let text = vec!["word"; 600].join(" ");
        let chunks = chunk(&text, &SegmenterConfig::default(), 255).unwrap();
        let counts: Vec<usize> = chunks.iter().map(|c| c.token_count).collect();
        assert_eq!(counts, vec![255, 255, 90]);
        assert_eq!(chunks.iter().map(|c| c.index).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(joined(&chunks), text);
    }

    #[test]
    fn empty_and_blank_text() {
        let cfg = SegmenterConfig::default();
        assert!(chunk("", &cfg, 5).unwrap().is_empty());
        let chunks = chunk("   ", &cfg, 5).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].token_count, 0);
    }

    #[test]
    fn zero_budget_rejected() {
        assert!(matches!(
            chunk("a", &SegmenterConfig::default(), 0),
            Err(TextSegError::ZeroChunkBudget)
        ));
    }

    #[test]
    fn char_unit_can_overflow_on_one_token() {
        let cfg = SegmenterConfig::default().with_token_unit(TokenUnit::Char);
        let err = chunk("pneumonoultramicroscopic", &cfg, 10).unwrap_err();
        assert!(matches!(err, TextSegError::SingleTokenTooLong { cost: 24, .. }));
        let ok = chunk("ab cd ef", &cfg, 4).unwrap();
        assert_eq!(ok.iter().map(|c| c.token_count).collect::<Vec<_>>(), vec![4, 2]);
    }

    #[test]
    fn alignment_verdicts() {
        let c = |n: usize| {
            (0..n)
                .map(|index| Chunk {
                    text: String::new(),
                    token_count: 0,
                    index,
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(validate_alignment(&c(3), &c(3)), AlignmentVerdict::Aligned);
        assert_eq!(
            validate_alignment(&c(3), &c(4)),
            AlignmentVerdict::Mismatch { source: 3, target: 4 }
        );
        assert_eq!(validate_alignment(&c(0), &c(0)), AlignmentVerdict::Aligned);
    }
}
