use std::sync::OnceLock;

use regex::Regex;

use super::{Category, KeywordSpan, MaskingError};

const OPEN: &str = "<annotated>";
const CLOSE: &str = "</annotated>";

fn tag_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"<(/?)([A-Za-z][A-Za-z0-9_-]*)\s*>").expect("static regex"))
}

/// Strips category tags from an annotator response.
///
/// Text outside the `<annotated>` envelope is ignored. Tag names outside the
/// known set map to [`Category::Other`]; empty tags are dropped and
/// surrounding whitespace inside a tag is left out of the span.
pub fn parse_annotation(annotated: &str) -> Result<(String, Vec<KeywordSpan>), MaskingError> {
    let malformed = |reason: &str| MaskingError::MalformedAnnotation {
        reason: reason.to_string(),
        raw: annotated.to_string(),
    };
    let start = annotated.find(OPEN).ok_or_else(|| malformed("missing <annotated> envelope"))?;
    let body_start = start + OPEN.len();
    let end = annotated[body_start..]
        .rfind(CLOSE)
        .map(|i| body_start + i)
        .ok_or_else(|| malformed("missing </annotated> envelope"))?;
    let body = &annotated[body_start..end];

    let mut plain = String::new();
    let mut plain_chars = 0usize;
    let mut spans = Vec::new();
    let mut open: Option<(String, usize, usize)> = None;
    let mut last = 0;
    for caps in tag_regex().captures_iter(body) {
        let whole = caps.get(0).expect("group 0");
        let text = &body[last..whole.start()];
        plain.push_str(text);
        plain_chars += text.chars().count();
        last = whole.end();

        let closing = !caps[1].is_empty();
        let name = caps[2].to_ascii_lowercase();
        if name == "annotated" {
            return Err(malformed("nested <annotated> envelope"));
        }
        match (&open, closing) {
            (None, false) => open = Some((name, plain_chars, plain.len())),
            (Some(_), false) => return Err(malformed(&format!("nested tag <{name}>"))),
            (None, true) => return Err(malformed(&format!("closing tag </{name}> without opening"))),
            (Some((open_name, _, _)), true) if *open_name != name => {
                return Err(malformed(&format!("<{open_name}> closed by </{name}>")));
            }
            (Some((_, char_start, byte_start)), true) => {
                let inner = &plain[*byte_start..];
                let lead = inner.chars().take_while(|c| c.is_whitespace()).count();
                let trimmed = inner.trim();
                if !trimmed.is_empty() {
                    let s = char_start + lead;
                    spans.push(KeywordSpan {
                        start: s,
                        end: s + trimmed.chars().count(),
                        surface: trimmed.to_string(),
                        category: Category::from_tag(&name),
                    });
                }
                open = None;
            }
        }
    }
    if let Some((name, _, _)) = open {
        return Err(malformed(&format!("unclosed tag <{name}>")));
    }
    plain.push_str(&body[last..]);
    Ok((plain, spans))
}

/// Inverse of [`parse_annotation`] for well-formed span sets.
pub fn render_annotation(plain: &str, spans: &[KeywordSpan]) -> String {
    let chars: Vec<char> = plain.chars().collect();
    let mut sorted: Vec<&KeywordSpan> = spans.iter().collect();
    sorted.sort_by_key(|s| s.start);
    let mut out = String::from(OPEN);
    let mut pos = 0;
    for s in sorted {
        out.extend(&chars[pos..s.start]);
        let tag = s.category.tag();
        out.push_str(&format!("<{tag}>"));
        out.extend(&chars[s.start..s.end]);
        out.push_str(&format!("</{tag}>"));
        pos = s.end;
    }
    out.extend(&chars[pos..]);
    out.push_str(CLOSE);
    out
}

/// Maps spans parsed from an annotator's copy of the text back onto the
/// original, searching each surface left to right. Spans whose surface is
/// not found are returned separately.
pub fn realign_spans(original: &str, plain: &str, spans: Vec<KeywordSpan>) -> (Vec<KeywordSpan>, Vec<KeywordSpan>) {
    if original == plain {
        return (spans, Vec::new());
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut byte_cursor = 0;
    for span in spans {
        match original[byte_cursor..].find(&span.surface) {
            Some(i) => {
                let byte_start = byte_cursor + i;
                let start = original[..byte_start].chars().count();
                byte_cursor = byte_start + span.surface.len();
                kept.push(KeywordSpan {
                    start,
                    end: start + span.surface.chars().count(),
                    ..span
                });
            }
            None => dropped.push(span),
        }
    }
    (kept, dropped)
}
