use serde::{Deserialize, Serialize};

/// One respondent's strict ordering of candidate systems, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceRanking {
    pub respondent_id: String,
    pub question_id: String,
    pub ranking: Vec<String>,
    pub duration_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairwiseOutcome {
    pub winner: String,
    pub loser: String,
}

impl PairwiseOutcome {
    pub fn new(winner: impl Into<String>, loser: impl Into<String>) -> Self {
        Self {
            winner: winner.into(),
            loser: loser.into(),
        }
    }
}

/// How a ranking becomes games.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposition {
    /// Every item beats every item ranked below it: k(k-1)/2 games.
    #[default]
    AllPairs,
    /// Each item beats only the next one: k-1 games.
    Adjacent,
}

pub fn rankings_to_pairwise(ranking: &[String], how: Decomposition) -> Vec<PairwiseOutcome> {
    let mut out = Vec::new();
    for i in 0..ranking.len() {
        let below = match how {
            Decomposition::AllPairs => &ranking[i + 1..],
            Decomposition::Adjacent => &ranking[i + 1..ranking.len().min(i + 2)],
        };
        for loser in below {
            if *loser != ranking[i] {
                out.push(PairwiseOutcome::new(ranking[i].clone(), loser.clone()));
            }
        }
    }
    out
}
