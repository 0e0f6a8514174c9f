use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{KeywordSpan, MaskingError};

/// The canonical placeholder for keyword `id`.
pub fn placeholder(id: usize) -> String {
    format!("[[K{id}]]")
}

/// Any bracketed `K<digits>` form, with whitespace allowed between parts.
fn candidate_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?:\[\s*)+[kK]\s*(\d+)(?:\s*\])+").expect("static regex"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskedText {
    pub masked: String,
    /// Placeholder id to the keyword surface it replaced.
    pub placeholders: BTreeMap<usize, String>,
    pub original: String,
    /// The spans that were masked, sorted by start.
    pub spans: Vec<KeywordSpan>,
}

/// Replaces each span with `[[K{n}]]`, numbering spans left to right.
///
/// The masked text must read back unambiguously: text outside the spans may
/// not contain placeholder-like literals, and a span may not sit directly
/// against `[` before it or `]` after it.
pub fn apply_mask(text: &str, spans: &[KeywordSpan]) -> Result<MaskedText, MaskingError> {
    let chars: Vec<char> = text.chars().collect();
    let mut sorted = spans.to_vec();
    sorted.sort_by_key(|s| (s.start, s.end));
    for (i, s) in sorted.iter().enumerate() {
        if s.start >= s.end || s.end > chars.len() {
            return Err(MaskingError::InvalidSpan {
                start: s.start,
                end: s.end,
                len: chars.len(),
            });
        }
        let actual: String = chars[s.start..s.end].iter().collect();
        if actual != s.surface {
            return Err(MaskingError::SurfaceMismatch {
                expected: s.surface.clone(),
                actual,
            });
        }
        if let Some(prev) = i.checked_sub(1).map(|j| &sorted[j]) {
            if prev.end > s.start {
                return Err(MaskingError::OverlappingSpans {
                    first: (prev.start, prev.end),
                    second: (s.start, s.end),
                });
            }
        }
    }

    let mut masked = String::with_capacity(text.len());
    let mut placeholders = BTreeMap::new();
    let mut pos = 0;
    for (id, s) in sorted.iter().enumerate() {
        masked.extend(&chars[pos..s.start]);
        masked.push_str(&placeholder(id));
        placeholders.insert(id, s.surface.clone());
        pos = s.end;
    }
    masked.extend(&chars[pos..]);

    for m in candidate_regex().find_iter(&masked) {
        let canonical = candidate_regex()
            .captures(m.as_str())
            .and_then(|c| c[1].parse::<usize>().ok())
            .is_some_and(|id| m.as_str() == placeholder(id) && id < sorted.len());
        if !canonical {
            return Err(MaskingError::ReservedLiteral(m.as_str().to_string()));
        }
    }

    Ok(MaskedText {
        masked,
        placeholders,
        original: text.to_string(),
        spans: sorted,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OnLost {
    /// Return [`MaskingError::PlaceholderLost`].
    #[default]
    Fail,
    /// Append the missing keywords after [`LOST_MARKER`].
    AppendMissing,
}

/// Separates appended keywords under [`OnLost::AppendMissing`].
pub const LOST_MARKER: &str = " ⟦lost: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryPolicy {
    /// Accept case changes, whitespace inside the literal and one bracket
    /// more or less per side.
    pub fuzzy: bool,
    pub on_lost: OnLost,
}

impl Default for RecoveryPolicy {
    fn default() -> Self {
        Self {
            fuzzy: true,
            on_lost: OnLost::Fail,
        }
    }
}

impl RecoveryPolicy {
    pub fn exact() -> Self {
        Self {
            fuzzy: false,
            on_lost: OnLost::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RecoveryStatus {
    Exact,
    Fuzzy { matched: String },
    Lost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recovery {
    pub id: usize,
    #[serde(flatten)]
    pub status: RecoveryStatus,
    /// How many times the placeholder was found.
    pub occurrences: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restored {
    pub text: String,
    /// One entry per placeholder id, in id order.
    pub report: Vec<Recovery>,
}

impl Restored {
    pub fn lost(&self) -> Vec<usize> {
        self.report
            .iter()
            .filter(|r| r.status == RecoveryStatus::Lost)
            .map(|r| r.id)
            .collect()
    }

    pub fn fuzzy_count(&self) -> usize {
        self.report
            .iter()
            .filter(|r| matches!(r.status, RecoveryStatus::Fuzzy { .. }))
            .count()
    }
}

fn bracket_counts(s: &str) -> (usize, usize) {
    (s.matches('[').count(), s.matches(']').count())
}

/// Puts keyword surfaces back in place of their placeholders.
pub fn restore_mask(translated: &str, m: &MaskedText, policy: RecoveryPolicy) -> Result<Restored, MaskingError> {
    let mut found: BTreeMap<usize, (usize, Option<String>)> = BTreeMap::new();
    let mut out = String::with_capacity(translated.len());
    let mut last = 0;
    for caps in candidate_regex().captures_iter(translated) {
        let whole = caps.get(0).expect("group 0");
        let Some((id, surface)) = caps[1]
            .parse::<usize>()
            .ok()
            .and_then(|id| m.placeholders.get(&id).map(|s| (id, s)))
        else {
            continue;
        };
        let text = whole.as_str();
        let exact = text == placeholder(id);
        let accepted = exact || {
            let (l, r) = bracket_counts(text);
            policy.fuzzy && (1..=3).contains(&l) && (1..=3).contains(&r)
        };
        if !accepted {
            continue;
        }
        out.push_str(&translated[last..whole.start()]);
        out.push_str(surface);
        last = whole.end();
        let entry = found.entry(id).or_insert((0, None));
        entry.0 += 1;
        if !exact && entry.1.is_none() {
            entry.1 = Some(text.to_string());
        }
    }
    out.push_str(&translated[last..]);

    let report: Vec<Recovery> = m
        .placeholders
        .keys()
        .map(|&id| match found.get(&id) {
            None => Recovery {
                id,
                status: RecoveryStatus::Lost,
                occurrences: 0,
            },
            Some((n, fuzzy)) => Recovery {
                id,
                status: match fuzzy {
                    Some(matched) => RecoveryStatus::Fuzzy {
                        matched: matched.clone(),
                    },
                    None => RecoveryStatus::Exact,
                },
                occurrences: *n,
            },
        })
        .collect();
    for r in &report {
        if let RecoveryStatus::Fuzzy { matched } = &r.status {
            tracing::debug!(id = r.id, matched = %matched, "placeholder recovered fuzzily");
        }
    }

    let lost: Vec<usize> = report
        .iter()
        .filter(|r| r.status == RecoveryStatus::Lost)
        .map(|r| r.id)
        .collect();
    if !lost.is_empty() {
        match policy.on_lost {
            OnLost::Fail => return Err(MaskingError::PlaceholderLost(lost)),
            OnLost::AppendMissing => {
                let words: Vec<&str> = lost.iter().map(|id| m.placeholders[id].as_str()).collect();
                out.push_str(LOST_MARKER);
                out.push_str(&words.join("; "));
                out.push('⟧');
            }
        }
    }
    Ok(Restored { text: out, report })
}

/// Ways a translator may garble a placeholder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corruption {
    Exact,
    Lowercase,
    InnerSpaces,
    LowercaseInnerSpaces,
    SpacedOut,
    LeftBracketMissing,
    RightBracketMissing,
    BothBracketsMissing,
    LeftBracketExtra,
    RightBracketExtra,
    BothBracketsExtra,
    MixedDrift,
    /// Surrounding whitespace removed.
    Glued,
    Dropped,
    Unbracketed,
    TwoBracketsMissing,
    TwoBracketsExtra,
    LetterReplaced,
    Transliterated,
}

impl Corruption {
    pub const ALL: [Corruption; 19] = [
        Corruption::Exact,
        Corruption::Lowercase,
        Corruption::InnerSpaces,
        Corruption::LowercaseInnerSpaces,
        Corruption::SpacedOut,
        Corruption::LeftBracketMissing,
        Corruption::RightBracketMissing,
        Corruption::BothBracketsMissing,
        Corruption::LeftBracketExtra,
        Corruption::RightBracketExtra,
        Corruption::BothBracketsExtra,
        Corruption::MixedDrift,
        Corruption::Glued,
        Corruption::Dropped,
        Corruption::Unbracketed,
        Corruption::TwoBracketsMissing,
        Corruption::TwoBracketsExtra,
        Corruption::LetterReplaced,
        Corruption::Transliterated,
    ];

    /// Whether fuzzy recovery is expected to find the placeholder.
    pub fn is_recoverable(self) -> bool {
        !matches!(
            self,
            Corruption::Dropped
                | Corruption::Unbracketed
                | Corruption::TwoBracketsMissing
                | Corruption::TwoBracketsExtra
                | Corruption::LetterReplaced
                | Corruption::Transliterated
        )
    }

    /// The garbled literal for placeholder `id`. [`Corruption::Glued`]
    /// returns the canonical literal; removing the surrounding whitespace is
    /// up to the caller.
    pub fn apply(self, id: usize) -> String {
        match self {
            Corruption::Exact | Corruption::Glued => placeholder(id),
            Corruption::Lowercase => format!("[[k{id}]]"),
            Corruption::InnerSpaces => format!("[[ K{id} ]]"),
            Corruption::LowercaseInnerSpaces => format!("[[ k{id} ]]"),
            Corruption::SpacedOut => format!("[ [ K {id} ] ]"),
            Corruption::LeftBracketMissing => format!("[K{id}]]"),
            Corruption::RightBracketMissing => format!("[[K{id}]"),
            Corruption::BothBracketsMissing => format!("[K{id}]"),
            Corruption::LeftBracketExtra => format!("[[[K{id}]]"),
            Corruption::RightBracketExtra => format!("[[K{id}]]]"),
            Corruption::BothBracketsExtra => format!("[[[K{id}]]]"),
            Corruption::MixedDrift => format!("[k {id}]]]"),
            Corruption::Dropped => String::new(),
            Corruption::Unbracketed => format!("K{id}"),
            Corruption::TwoBracketsMissing => format!("K{id}]]"),
            Corruption::TwoBracketsExtra => format!("[[[[K{id}]]]]"),
            Corruption::LetterReplaced => format!("[[X{id}]]"),
            Corruption::Transliterated => format!("[[เค{id}]]"),
        }
    }
}
