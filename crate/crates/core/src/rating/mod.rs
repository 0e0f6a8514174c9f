//! Human evaluation math: factual band-score aggregation, ranking to
//! pairwise games, and single-period batch Glicko ratings.

mod factual;
mod glicko;
mod pairwise;

pub use factual::{factual_aggregate, median, read_sheets_csv, FactualScoreSheet, ScoreBand};
pub use glicko::{
    confidence_interval, glicko_rate, initial_ratings, leaderboard, read_ratings_csv, write_leaderboard_csv, LeaderboardRow,
    PlayerRating, INITIAL_RATING, INITIAL_RD, LEADERBOARD_COLUMNS,
};
pub use pairwise::{rankings_to_pairwise, Decomposition, PairwiseOutcome, PreferenceRanking};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RatingError {
    #[error("evaluator {evaluator} did not score system {system}")]
    MissingSystem { evaluator: String, system: String },
    #[error("evaluator {evaluator} has no scores for system {system}")]
    EmptyScores { evaluator: String, system: String },
    #[error("evaluator {evaluator} gave {system} a score of {value}, outside the band")]
    ScoreOutOfBand { evaluator: String, system: String, value: f64 },
    #[error("unknown system {0}")]
    UnknownSystem(String),
    #[error("system {0} cannot play itself")]
    SelfGame(String),
    #[error("rating for {0} must be finite with rd in (0, 350]")]
    InvalidRating(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}
