use super::content_tokens;
use crate::textseg::SegmenterConfig;

/// Exact-match unigram alignment: for each hypothesis token in order, take
/// the unused reference token that extends the current chunk if there is
/// one, else the leftmost unused match. Returns (matches, chunks).
fn align(hyp: &[String], reference: &[String]) -> (usize, usize) {
    let mut used = vec![false; reference.len()];
    let mut matches = 0;
    let mut chunks = 0;
    let mut prev: Option<usize> = None;
    for tok in hyp {
        let next = prev
            .map(|p| p + 1)
            .filter(|&j| j < reference.len() && !used[j] && reference[j] == *tok)
            .or_else(|| (0..reference.len()).find(|&j| !used[j] && reference[j] == *tok));
        match next {
            Some(j) => {
                used[j] = true;
                matches += 1;
                if prev.is_none_or(|p| p + 1 != j) {
                    chunks += 1;
                }
                prev = Some(j);
            }
            None => prev = None,
        }
    }
    (matches, chunks)
}

/// METEOR restricted to exact matches (no stemming or synonyms).
///
/// `F_mean = 10PR / (R + 9P)`, penalty `0.5 * (chunks / matches)^3`,
/// score `F_mean * (1 - penalty)`.
pub fn meteor_lite(hypothesis: &str, reference: &str, cfg: &SegmenterConfig) -> f64 {
    let hyp = content_tokens(hypothesis, cfg);
    let reference = content_tokens(reference, cfg);
    let (matches, chunks) = align(&hyp, &reference);
    if matches == 0 {
        return 0.0;
    }
    let p = matches as f64 / hyp.len() as f64;
    let r = matches as f64 / reference.len() as f64;
    let f_mean = 10.0 * p * r / (r + 9.0 * p);
    let frag = chunks as f64 / matches as f64;
    let penalty = 0.5 * frag.powi(3);
    f_mean * (1.0 - penalty)
}
