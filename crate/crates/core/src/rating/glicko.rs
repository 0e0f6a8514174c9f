use std::collections::BTreeMap;
use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{PairwiseOutcome, RatingError};

pub const INITIAL_RATING: f64 = 1500.0;
pub const INITIAL_RD: f64 = 350.0;

const Q: f64 = LN_10 / 400.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRating {
    pub system_id: String,
    pub r: f64,
    pub rd: f64,
}

impl PlayerRating {
    pub fn new(system_id: impl Into<String>, r: f64, rd: f64) -> Self {
        Self {
            system_id: system_id.into(),
            r,
            rd,
        }
    }

    pub fn fresh(system_id: impl Into<String>) -> Self {
        Self::new(system_id, INITIAL_RATING, INITIAL_RD)
    }
}

/// `1638.57 ± 49.39`, the half-width being two deviations.
impl fmt::Display for PlayerRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2} ± {:.2}", self.r, 2.0 * self.rd)
    }
}

/// `(r - 2 rd, r + 2 rd)`
pub fn confidence_interval(p: &PlayerRating) -> (f64, f64) {
    (p.r - 2.0 * p.rd, p.r + 2.0 * p.rd)
}

pub fn initial_ratings<S: AsRef<str>>(systems: impl IntoIterator<Item = S>) -> BTreeMap<String, PlayerRating> {
    systems
        .into_iter()
        .map(|s| (s.as_ref().to_string(), PlayerRating::fresh(s.as_ref())))
        .collect()
}

fn g(rd: f64) -> f64 {
    1.0 / (1.0 + 3.0 * Q * Q * rd * rd / (PI * PI)).sqrt()
}

fn expected(r: f64, rj: f64, rdj: f64) -> f64 {
    1.0 / (1.0 + 10f64.powf(-g(rdj) * (r - rj) / 400.0))
}

/// Rates every game in one period: all expectations use pre-period
/// ratings, and deviations do not grow between periods.
///
/// Each player's terms are summed in a canonical order, so the result does
/// not depend on the order of `games`.
pub fn glicko_rate(
    initial: &BTreeMap<String, PlayerRating>,
    games: &[PairwiseOutcome],
) -> Result<BTreeMap<String, PlayerRating>, RatingError> {
    for p in initial.values() {
        if !(p.r.is_finite() && p.rd > 0.0 && p.rd <= INITIAL_RD) {
            return Err(RatingError::InvalidRating(p.system_id.clone()));
        }
    }
    // (opponent, score) per player
    let mut played: BTreeMap<&str, Vec<(&str, u8)>> = BTreeMap::new();
    for game in games {
        for id in [&game.winner, &game.loser] {
            if !initial.contains_key(id) {
                return Err(RatingError::UnknownSystem(id.clone()));
            }
        }
        if game.winner == game.loser {
            return Err(RatingError::SelfGame(game.winner.clone()));
        }
        played.entry(&game.winner).or_default().push((&game.loser, 1));
        played.entry(&game.loser).or_default().push((&game.winner, 0));
    }

    let mut out = initial.clone();
    for (id, mut opponents) in played {
        opponents.sort_unstable();
        let me = &initial[id];
        let mut inv_d2 = 0.0;
        let mut delta = 0.0;
        for (opp, s) in opponents {
            let o = &initial[opp];
            let gj = g(o.rd);
            let e = expected(me.r, o.r, o.rd);
            inv_d2 += gj * gj * e * (1.0 - e);
            delta += gj * (f64::from(s) - e);
        }
        inv_d2 *= Q * Q;
        let denom = 1.0 / (me.rd * me.rd) + inv_d2;
        let p = out.get_mut(id).expect("player exists");
        p.r = me.r + Q / denom * delta;
        p.rd = (1.0 / denom).sqrt();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub system_id: String,
    pub rating: f64,
    pub rd: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub games: usize,
}

pub const LEADERBOARD_COLUMNS: [&str; 6] = ["system_id", "rating", "rd", "ci_lo", "ci_hi", "games"];

/// Rates `games` and sorts by rating, highest first (ties by id).
pub fn leaderboard(
    initial: &BTreeMap<String, PlayerRating>,
    games: &[PairwiseOutcome],
) -> Result<Vec<LeaderboardRow>, RatingError> {
    let rated = glicko_rate(initial, games)?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for g in games {
        *counts.entry(&g.winner).or_default() += 1;
        *counts.entry(&g.loser).or_default() += 1;
    }
    let mut rows: Vec<LeaderboardRow> = rated
        .values()
        .map(|p| {
            let (ci_lo, ci_hi) = confidence_interval(p);
            LeaderboardRow {
                system_id: p.system_id.clone(),
                rating: p.r,
                rd: p.rd,
                ci_lo,
                ci_hi,
                games: counts.get(p.system_id.as_str()).copied().unwrap_or(0),
            }
        })
        .collect();
    rows.sort_by(|a, b| b.rating.total_cmp(&a.rating).then_with(|| a.system_id.cmp(&b.system_id)));
    Ok(rows)
}

/// Reads starting ratings from CSV with columns `system_id,r,rd`.
pub fn read_ratings_csv<R: std::io::Read>(reader: R) -> Result<BTreeMap<String, PlayerRating>, RatingError> {
    let mut out = BTreeMap::new();
    for (i, row) in csv::Reader::from_reader(reader).deserialize::<PlayerRating>().enumerate() {
        let p = row.map_err(|e| RatingError::Parse(format!("row {}: {e}", i + 1)))?;
        if !(p.r.is_finite() && p.rd.is_finite() && p.rd > 0.0) {
            return Err(RatingError::InvalidRating(p.system_id));
        }
        out.insert(p.system_id.clone(), p);
    }
    Ok(out)
}

pub fn write_leaderboard_csv<W: Write>(rows: &[LeaderboardRow], writer: W) -> Result<(), RatingError> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| RatingError::Io(e.to_string());
    w.write_record(LEADERBOARD_COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record([
            r.system_id.clone(),
            format!("{:.6}", r.rating),
            format!("{:.6}", r.rd),
            format!("{:.6}", r.ci_lo),
            format!("{:.6}", r.ci_hi),
            r.games.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| RatingError::Io(e.to_string()))
}
