//! Slow, obviously-correct reference implementations.
#![allow(dead_code)]

use std::collections::HashMap;

/// Edit distance by memoised recursion on suffixes.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    fn go<T: PartialEq>(a: &[T], b: &[T], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(&d) = memo.get(&(i, j)) {
            return d;
        }
        let d = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j, memo)
                .min(go(a, b, i, j + 1, memo))
                .min(go(a, b, i + 1, j + 1, memo))
        };
        memo.insert((i, j), d);
        d
    }
    go(a, b, 0, 0, &mut HashMap::new())
}

fn occurrences<T: PartialEq>(seq: &[T], gram: &[T]) -> usize {
    if gram.len() > seq.len() {
        return 0;
    }
    (0..=seq.len() - gram.len()).filter(|&i| &seq[i..i + gram.len()] == gram).count()
}

/// Clipped matches and total hypothesis n-grams for order `n`, by scanning.
pub fn clipped<T: PartialEq>(hyp: &[T], reference: &[T], n: usize) -> (usize, usize) {
    if hyp.len() < n {
        return (0, 0);
    }
    let total = hyp.len() - n + 1;
    let mut matched = 0;
    for i in 0..total {
        let gram = &hyp[i..i + n];
        if (0..i).any(|k| &hyp[k..k + n] == gram) {
            continue;
        }
        matched += occurrences(hyp, gram).min(occurrences(reference, gram));
    }
    (matched, total)
}

/// Sentence BLEU-4 with +1 smoothing on zero-match orders above unigrams.
pub fn bleu<T: PartialEq>(hyp: &[T], reference: &[T]) -> f64 {
    if hyp.is_empty() {
        return if reference.is_empty() { 1.0 } else { 0.0 };
    }
    let mut logs = 0.0;
    for n in 1..=4 {
        let (m, t) = clipped(hyp, reference, n);
        if n == 1 && m == 0 {
            return 0.0;
        }
        let p = if n > 1 && m == 0 { 1.0 / (t + 1) as f64 } else { m as f64 / t as f64 };
        logs += p.ln();
    }
    let bp = if hyp.len() > reference.len() {
        1.0
    } else {
        (1.0 - reference.len() as f64 / hyp.len() as f64).exp()
    };
    bp * (logs / 4.0).exp()
}

/// chrF with character order 6 and beta 2, whitespace removed.
pub fn chrf(hyp: &str, reference: &str) -> f64 {
    let h: Vec<char> = hyp.chars().filter(|c| !c.is_whitespace()).collect();
    let r: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
    if h.is_empty() && r.is_empty() {
        return 1.0;
    }
    let (mut ps, mut rs, mut orders) = (0.0, 0.0, 0);
    for n in 1..=6 {
        if h.len() < n || r.len() < n {
            continue;
        }
        let (m, th) = clipped(&h, &r, n);
        let tr = r.len() - n + 1;
        ps += m as f64 / th as f64;
        rs += m as f64 / tr as f64;
        orders += 1;
    }
    if orders == 0 {
        return 0.0;
    }
    let (p, rc) = (ps / orders as f64, rs / orders as f64);
    if 4.0 * p + rc == 0.0 {
        0.0
    } else {
        5.0 * p * rc / (4.0 * p + rc)
    }
}

/// Single-player Glicko update against `(r_j, rd_j, score)` games.
pub fn glicko(r: f64, rd: f64, games: &[(f64, f64, f64)]) -> (f64, f64) {
    if games.is_empty() {
        return (r, rd);
    }
    let q = 10f64.ln() / 400.0;
    let pi2 = std::f64::consts::PI.powi(2);
    let g = |rd_j: f64| 1.0 / (1.0 + 3.0 * q.powi(2) * rd_j.powi(2) / pi2).sqrt();
    let e = |r_j: f64, rd_j: f64| 1.0 / (1.0 + 10f64.powf(-g(rd_j) * (r - r_j) / 400.0));
    let d2_inv = q.powi(2) * games.iter().map(|&(rj, rdj, _)| g(rdj).powi(2) * e(rj, rdj) * (1.0 - e(rj, rdj))).sum::<f64>();
    let sum: f64 = games.iter().map(|&(rj, rdj, s)| g(rdj) * (s - e(rj, rdj))).sum();
    let denom = 1.0 / rd.powi(2) + d2_inv;
    (r + q / denom * sum, (1.0 / denom).sqrt())
}

/// Every string over `alphabet` of length at most `max_len`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s: &Vec<char>| {
                alphabet.iter().map(move |&c| {
                    let mut t = s.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Lowest (unknown chars, tokens) over every way to cover `run` with
/// dictionary words and unknown clusters ending at `boundary` positions.
/// Adjacent unknown clusters count as one token.
pub fn best_thai_cost(run: &[char], words: &[&str], boundary: &dyn Fn(&[char], usize) -> bool) -> (usize, usize) {
    fn go(
        run: &[char],
        i: usize,
        prev_unknown: bool,
        words: &[Vec<char>],
        boundary: &dyn Fn(&[char], usize) -> bool,
    ) -> (usize, usize) {
        if i == run.len() {
            return (0, 0);
        }
        let mut best = (usize::MAX, usize::MAX);
        for w in words {
            if run[i..].starts_with(w) {
                let (u, t) = go(run, i + w.len(), false, words, boundary);
                best = best.min((u, t + 1));
            }
        }
        let j = (i + 1..=run.len()).find(|&j| boundary(run, j)).unwrap();
        let (u, t) = go(run, j, true, words, boundary);
        best.min((u + j - i, t + usize::from(!prev_unknown)))
    }
    let words: Vec<Vec<char>> = words.iter().map(|w| w.chars().collect()).collect();
    go(run, 0, false, &words, boundary)
}
