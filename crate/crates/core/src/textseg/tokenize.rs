use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::SegmenterConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenClass {
    Thai,
    Latin,
    Numeric,
    Punct,
    Whitespace,
    /// A canonical `[[K{n}]]` masking placeholder.
    Placeholder,
    /// Letters from scripts other than Thai and Latin (Greek, CJK, ...).
    Other,
}

/// A classified span of the (NFC-normalized) input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    /// Half-open char offsets into the normalized input.
    pub span: Range<usize>,
    pub class: TokenClass,
}

impl Token {
    pub fn is_whitespace(&self) -> bool {
        self.class == TokenClass::Whitespace
    }
}

pub(crate) fn is_thai(c: char) -> bool {
    ('\u{0E00}'..='\u{0E7F}').contains(&c)
}

fn is_thai_digit(c: char) -> bool {
    ('\u{0E50}'..='\u{0E59}').contains(&c)
}

fn is_thai_letterish(c: char) -> bool {
    is_thai(c) && !is_thai_digit(c)
}

pub(crate) fn is_latin_letter(c: char) -> bool {
    c.is_alphabetic()
        && (c.is_ascii_alphabetic()
            || ('\u{00AA}'..='\u{024F}').contains(&c)
            || ('\u{1E00}'..='\u{1EFF}').contains(&c)
            || ('\u{2C60}'..='\u{2C7F}').contains(&c)
            || ('\u{A720}'..='\u{A7FF}').contains(&c))
}

fn is_other_letter(c: char) -> bool {
    c.is_alphabetic() && !is_thai(c) && !is_latin_letter(c)
}

/// Vowels and tone marks written above/below the preceding consonant.
fn is_thai_combining(c: char) -> bool {
    c == '\u{0E31}' || ('\u{0E34}'..='\u{0E3A}').contains(&c) || ('\u{0E47}'..='\u{0E4E}').contains(&c)
}

/// Vowels written before the consonant they follow phonetically.
fn is_thai_leading_vowel(c: char) -> bool {
    ('\u{0E40}'..='\u{0E44}').contains(&c)
}

/// Matches the canonical placeholder literal `[[K<digits>]]` at `chars[at..]`,
/// returning its length in chars.
fn placeholder_len(chars: &[char], at: usize) -> Option<usize> {
    let rest = &chars[at..];
    if rest.len() < 6 || rest[0] != '[' || rest[1] != '[' || rest[2] != 'K' {
        return None;
    }
    let digits = rest[3..].iter().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return None;
    }
    let close = 3 + digits;
    (rest.len() >= close + 2 && rest[close] == ']' && rest[close + 1] == ']').then_some(close + 2)
}

/// Splits `text` into classified tokens.
///
/// The input is NFC-normalized first. Thai runs go through dictionary
/// maximal matching; Latin runs split at whitespace and punctuation.
/// Concatenating the token texts reproduces the normalized input.
pub fn tokenize(text: &str, cfg: &SegmenterConfig) -> Vec<Token> {
    let chars: Vec<char> = text.nfc().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let n = chars.len();

    let push = |out: &mut Vec<Token>, range: Range<usize>, class: TokenClass| {
        out.push(Token {
            text: chars[range.clone()].iter().collect(),
            span: range,
            class,
        });
    };

    while i < n {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            while i < n && chars[i].is_whitespace() {
                i += 1;
            }
            push(&mut out, start..i, TokenClass::Whitespace);
        } else if is_thai_letterish(c) {
            while i < n && is_thai_letterish(chars[i]) {
                i += 1;
            }
            for piece in segment_thai_run(&chars[start..i], cfg) {
                push(&mut out, start + piece.start..start + piece.end, TokenClass::Thai);
            }
        } else if is_latin_letter(c) {
            while i < n && (is_latin_letter(chars[i]) || chars[i].is_ascii_digit()) {
                i += 1;
            }
            push(&mut out, start..i, TokenClass::Latin);
        } else if c.is_numeric() {
            i += 1;
            while i < n {
                if chars[i].is_numeric() {
                    i += 1;
                } else if (chars[i] == '.' || chars[i] == ',')
                    && i + 1 < n
                    && chars[i + 1].is_numeric()
                {
                    i += 2;
                } else {
                    break;
                }
            }
            push(&mut out, start..i, TokenClass::Numeric);
        } else if let Some(len) = placeholder_len(&chars, i) {
            i += len;
            push(&mut out, start..i, TokenClass::Placeholder);
        } else if is_other_letter(c) {
            while i < n && is_other_letter(chars[i]) {
                i += 1;
            }
            push(&mut out, start..i, TokenClass::Other);
        } else {
            i += 1;
            push(&mut out, start..i, TokenClass::Punct);
        }
    }
    out
}

/// Case-folded multiset of the Latin-class tokens in `text`.
pub fn english_tokens(text: &str, cfg: &SegmenterConfig) -> BTreeMap<String, usize> {
    let mut bag = BTreeMap::new();
    for tok in tokenize(text, cfg) {
        if tok.class == TokenClass::Latin {
            *bag.entry(tok.text.to_lowercase()).or_insert(0) += 1;
        }
    }
    bag
}

/// Positions inside a Thai run where an unknown cluster may end.
fn cluster_boundaries(run: &[char]) -> Vec<bool> {
    let n = run.len();
    let mut ok = vec![false; n + 1];
    ok[n] = true;
    for i in 1..n {
        ok[i] = !is_thai_combining(run[i]) && !is_thai_leading_vowel(run[i - 1]);
    }
    ok
}

/// Maximal matching over one Thai run.
///
/// Picks the segmentation with the fewest out-of-dictionary characters and,
/// among those, the fewest tokens. Adjacent unknown clusters merge into one
/// token. Ties go to the longest dictionary word at the earliest position.
/// Returns char ranges relative to the run.
pub(crate) fn segment_thai_run(run: &[char], cfg: &SegmenterConfig) -> Vec<Range<usize>> {
    let n = run.len();
    if n == 0 {
        return Vec::new();
    }
    let dict = cfg.dictionary();
    let boundaries = cluster_boundaries(run);

    #[derive(Clone, Copy)]
    enum Step {
        Word(usize),
        Unknown(usize),
    }

    // best[i][u]: cost of segmenting run[i..] given the step ending at i was
    // unknown (u = 1) or not (u = 0). Cost = (unknown chars, tokens).
    let mut best = vec![[(0usize, 0usize); 2]; n + 1];
    let mut choice = vec![[Step::Word(0); 2]; n + 1];
    let mut buf = String::new();

    for i in (0..n).rev() {
        let max_j = (i + cfg.max_word_len()).min(n);
        for u in 0..2 {
            let mut cur: Option<((usize, usize), Step)> = None;
            for j in (i + 1..=max_j).rev() {
                buf.clear();
                buf.extend(&run[i..j]);
                if dict.contains(&buf) {
                    let (unk, toks) = best[j][0];
                    let cost = (unk, toks + 1);
                    if cur.is_none_or(|(c, _)| cost < c) {
                        cur = Some((cost, Step::Word(j)));
                    }
                }
            }
            let j = (i + 1..=n).find(|&j| boundaries[j]).unwrap_or(n);
            let (unk, toks) = best[j][1];
            let cost = (unk + (j - i), toks + if u == 1 { 0 } else { 1 });
            if cur.is_none_or(|(c, _)| cost < c) {
                cur = Some((cost, Step::Unknown(j)));
            }
            let (cost, step) = cur.expect("unknown step always available");
            best[i][u] = cost;
            choice[i][u] = step;
        }
    }

    let mut pieces: Vec<Range<usize>> = Vec::new();
    let mut i = 0;
    let mut u = 0;
    let mut prev_unknown = false;
    while i < n {
        match choice[i][u] {
            Step::Word(j) => {
                pieces.push(i..j);
                prev_unknown = false;
                u = 0;
                i = j;
            }
            Step::Unknown(j) => {
                match pieces.last_mut() {
                    Some(last) if prev_unknown => last.end = j,
                    _ => pieces.push(i..j),
                }
                prev_unknown = true;
                u = 1;
                i = j;
            }
        }
    }
    pieces
}
