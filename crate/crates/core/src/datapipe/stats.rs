use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::ParallelRecord;
use crate::textseg::{is_thai, tokenize, SegmenterConfig, TokenClass};

/// Corpus counts over the target side.
///
/// Sentence counts are heuristic: Latin terminators (`.`, `!`, `?` before
/// whitespace or end of text) and whitespace between two Thai characters
/// both end a sentence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub samples: usize,
    pub sentences: usize,
    pub english_tokens: usize,
    pub thai_tokens: usize,
    pub numeric_tokens: usize,
}

impl DatasetStats {
    /// English share of English, Thai and numeric tokens; 0 when there are none.
    pub fn ratio_en_all(&self) -> f64 {
        let total = self.english_tokens + self.thai_tokens + self.numeric_tokens;
        if total == 0 {
            0.0
        } else {
            self.english_tokens as f64 / total as f64
        }
    }

    pub const HEADER: &'static str = "#Samples | #Sentences | #English Tokens | Ratio En:All";
}

impl Add for DatasetStats {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            samples: self.samples + o.samples,
            sentences: self.sentences + o.sentences,
            english_tokens: self.english_tokens + o.english_tokens,
            thai_tokens: self.thai_tokens + o.thai_tokens,
            numeric_tokens: self.numeric_tokens + o.numeric_tokens,
        }
    }
}

fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// `63,982 | 188,037 | 640,951 | 16.1%`
impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {} | {} | {:.1}%",
            thousands(self.samples),
            thousands(self.sentences),
            thousands(self.english_tokens),
            self.ratio_en_all() * 100.0
        )
    }
}

pub fn count_sentences(text: &str) -> usize {
    let chars: Vec<char> = text.chars().collect();
    let mut count = 0;
    let mut open = false;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            let run_end = (i..chars.len()).find(|&j| !chars[j].is_whitespace()).unwrap_or(chars.len());
            let thai_gap = i > 0 && run_end < chars.len() && is_thai(chars[i - 1]) && is_thai(chars[run_end]);
            if thai_gap && open {
                count += 1;
                open = false;
            }
            i = run_end;
            continue;
        }
        let terminal = matches!(c, '.' | '!' | '?') && chars.get(i + 1).is_none_or(|n| n.is_whitespace());
        if terminal {
            if open {
                count += 1;
            }
            open = false;
        } else {
            open = true;
        }
        i += 1;
    }
    count + usize::from(open)
}

pub fn stats(dataset: &[ParallelRecord], cfg: &SegmenterConfig) -> DatasetStats {
    dataset
        .iter()
        .map(|r| {
            let mut s = DatasetStats {
                samples: 1,
                sentences: count_sentences(&r.target_cs),
                ..DatasetStats::default()
            };
            for tok in tokenize(&r.target_cs, cfg) {
                match tok.class {
                    TokenClass::Latin => s.english_tokens += 1,
                    TokenClass::Thai => s.thai_tokens += 1,
                    TokenClass::Numeric => s.numeric_tokens += 1,
                    _ => {}
                }
            }
            s
        })
        .fold(DatasetStats::default(), Add::add)
}
