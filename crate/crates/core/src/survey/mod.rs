//! Ranking surveys: questionnaire construction, response validation,
//! export to pairwise games, append-only journals and a REST service.
//!
//! System identities stay on the server. Respondents only ever see
//! candidate ids and texts.

mod build;
mod export;
mod journal;
pub mod server;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use build::build_questionnaire;
pub use export::{export_outcomes, SurveyExport};
pub use journal::{Journal, SurveyStore};
pub use server::SurveyService;
pub use validate::{kendall_tau_distance, mean_ordering_distance, validate_response};

/// Instruction page shown before the first question.
pub const INSTRUCTIONS_HTML: &str = include_str!("../../data/instructions.html");

/// One source text with every system's translation of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestItem {
    pub item_id: String,
    pub source_en: String,
    pub outputs: BTreeMap<String, String>,
}

/// Reads one [`TestItem`] per non-blank line.
pub fn read_test_set<R: std::io::Read>(reader: R) -> Result<Vec<TestItem>, SurveyError> {
    use std::io::BufRead;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| SurveyError::Journal(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let item: TestItem = serde_json::from_str(&line)
            .map_err(|e| SurveyError::InvalidConfig(format!("test set line {}: {e}", i + 1)))?;
        out.push(item);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub questions: usize,
    pub candidates: usize,
    /// Put the human reference in every question.
    pub force_include_human: bool,
    pub human_system_id: String,
    pub min_duration_secs: f64,
    /// Mean normalized Kendall tau distance below which orderings count as
    /// near-identical.
    pub similarity_threshold: f64,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        Self {
            questions: 10,
            candidates: 5,
            force_include_human: false,
            human_system_id: "human".into(),
            min_duration_secs: 300.0,
            similarity_threshold: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub candidate_id: String,
    pub system_id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub question_id: String,
    pub item_id: String,
    pub source_en: String,
    /// In display order.
    pub candidates: Vec<Candidate>,
}

/// Server-side questionnaire, including the hidden system ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Questionnaire {
    pub id: String,
    pub seed: u64,
    /// Unix seconds.
    pub created_at: u64,
    pub questions: Vec<Question>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindCandidate {
    pub candidate_id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindQuestion {
    pub question_id: String,
    pub source_en: String,
    pub candidates: Vec<BlindCandidate>,
}

/// What respondents receive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindQuestionnaire {
    pub id: String,
    pub created_at: u64,
    pub questions: Vec<BlindQuestion>,
}

impl Questionnaire {
    pub fn blinded(&self) -> BlindQuestionnaire {
        BlindQuestionnaire {
            id: self.id.clone(),
            created_at: self.created_at,
            questions: self
                .questions
                .iter()
                .map(|q| BlindQuestion {
                    question_id: q.question_id.clone(),
                    source_en: q.source_en.clone(),
                    candidates: q
                        .candidates
                        .iter()
                        .map(|c| BlindCandidate {
                            candidate_id: c.candidate_id.clone(),
                            text: c.text.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn question(&self, question_id: &str) -> Option<&Question> {
        self.questions.iter().find(|q| q.question_id == question_id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionRanking {
    pub question_id: String,
    /// Candidate ids, best first.
    pub ranking: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Durations {
    pub total_secs: f64,
    #[serde(default)]
    pub per_question_secs: BTreeMap<String, f64>,
}

/// The `POST /responses` body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseSubmission {
    pub questionnaire_id: String,
    /// Opaque respondent token.
    pub respondent_id: String,
    pub rankings: Vec<QuestionRanking>,
    pub durations: Durations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Validity {
    pub time_flag: bool,
    pub ordering_flag: bool,
    pub mean_ordering_distance: f64,
    pub accepted: bool,
    /// Set after manual review; wins over `accepted` when present.
    #[serde(default)]
    pub override_accepted: Option<bool>,
}

impl Validity {
    pub fn is_accepted(&self) -> bool {
        self.override_accepted.unwrap_or(self.accepted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyResponse {
    pub response_id: String,
    pub questionnaire_id: String,
    pub respondent_id: String,
    pub rankings: Vec<QuestionRanking>,
    pub durations: Durations,
    pub validity: Validity,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurveyError {
    #[error("pool has {have} systems, need at least {need}")]
    PoolTooSmall { have: usize, need: usize },
    #[error("test set has {have} items, need at least {need}")]
    TestSetTooSmall { have: usize, need: usize },
    #[error("item {item} has no output from system {system}")]
    MissingOutput { item: String, system: String },
    #[error("invalid survey config: {0}")]
    InvalidConfig(String),
    #[error("incomplete response: {0}")]
    IncompleteResponse(String),
    #[error("unknown questionnaire {0}")]
    UnknownQuestionnaire(String),
    #[error("candidate {candidate} is not part of question {question}")]
    UnknownCandidate { question: String, candidate: String },
    #[error("journal: {0}")]
    Journal(String),
}
