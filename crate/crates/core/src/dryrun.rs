//! Offline run of the whole toolkit on one corpus with fake backends.
//!
//! Records carry English sources and human code-switched references. The
//! run translates them with masking, chunk-aligns the result, scores four
//! fake systems against the references, filters, builds a questionnaire,
//! answers it with simulated respondents and rates the systems. Everything
//! is seeded, so equal inputs give byte-identical reports.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::backends::fake::{FnBackend, IdentityTranslator, LexiconAnnotator, LexiconTranslator, ManglingTranslator};
use crate::backends::{Annotator, Translator};
use crate::datapipe::{self, DataError, ParallelRecord};
use crate::masking::{pseudo_cs_translate, Corruption, MaskingError, OnLost, RecoveryPolicy};
use crate::metrics::{evaluate_corpus, sentence_chrf, DiceProvider, EvaluationReport, MetricError};
use crate::rating::{initial_ratings, leaderboard, LeaderboardRow, RatingError};
use crate::survey::{
    build_questionnaire, export_outcomes, validate_response, Durations, QuestionRanking, Questionnaire,
    ResponseSubmission, SurveyConfig, SurveyError, TestItem,
};
use crate::textseg::{chunk, validate_alignment, SegmenterConfig, TextSegError, DEFAULT_MAX_TOKENS};

pub const HUMAN: &str = "human";
pub const SYSTEMS: [&str; 5] = [HUMAN, "lexicon-mask", "lexicon-mangled", "lexicon-truncated", "identity"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DryRunConfig {
    pub seed: u64,
    pub respondents: usize,
    /// How many of the respondents click through in display order, fast.
    pub careless: usize,
    pub max_tokens: usize,
    pub threshold: f64,
    pub survey: SurveyConfig,
}

impl Default for DryRunConfig {
    fn default() -> Self {
        Self {
            seed: 20240,
            respondents: 12,
            careless: 2,
            max_tokens: DEFAULT_MAX_TOKENS,
            threshold: datapipe::DEFAULT_THRESHOLD,
            survey: SurveyConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DryRunReport {
    pub records: usize,
    pub translated: Vec<ParallelRecord>,
    pub chunks_aligned: usize,
    pub chunk_mismatches: Vec<String>,
    pub evaluation: Vec<EvaluationReport>,
    pub filter_kept: usize,
    pub filter_rejected: usize,
    pub questionnaire: Questionnaire,
    pub responses: usize,
    pub accepted: usize,
    pub outcomes: usize,
    pub leaderboard: Vec<LeaderboardRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum DryRunError {
    #[error(transparent)]
    Masking(#[from] MaskingError),
    #[error(transparent)]
    TextSeg(#[from] TextSegError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Survey(#[from] SurveyError),
    #[error(transparent)]
    Rating(#[from] RatingError),
}

fn translate_all(
    records: &[ParallelRecord],
    annotator: &dyn Annotator,
    translator: &dyn Translator,
    policy: RecoveryPolicy,
) -> Result<Vec<ParallelRecord>, MaskingError> {
    records
        .iter()
        .map(|r| pseudo_cs_translate(&r.id, &r.source_en, annotator, translator, policy))
        .collect()
}

/// Ranks by chrF against the reference, then swaps neighbours at random.
fn noisy_ranking(q: &crate::survey::Question, reference: &str, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut scored: Vec<(f64, &str)> = q
        .candidates
        .iter()
        .map(|c| (sentence_chrf(&c.text, reference), c.candidate_id.as_str()))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    let mut ids: Vec<String> = scored.into_iter().map(|(_, id)| id.to_string()).collect();
    for i in 0..ids.len().saturating_sub(1) {
        if rng.gen_bool(0.25) {
            ids.swap(i, i + 1);
        }
    }
    ids
}

pub fn dry_run(records: &[ParallelRecord], cfg: &DryRunConfig) -> Result<DryRunReport, DryRunError> {
    let seg = SegmenterConfig::default();
    let annotator = LexiconAnnotator::default();
    let lexicon = LexiconTranslator::default();

    let translated = translate_all(records, &annotator, &lexicon, RecoveryPolicy::default())?;

    let mut chunks_aligned = 0;
    let mut chunk_mismatches = Vec::new();
    for r in &translated {
        let src = chunk(&r.source_en, &seg, cfg.max_tokens)?;
        let tgt = chunk(&r.target_cs, &seg, cfg.max_tokens)?;
        if validate_alignment(&src, &tgt).is_aligned() {
            chunks_aligned += src.len();
        } else {
            chunk_mismatches.push(r.id.clone());
        }
    }

    let mangler = ManglingTranslator::new(
        LexiconTranslator::default(),
        vec![Corruption::Exact, Corruption::Dropped, Corruption::LowercaseInnerSpaces],
    );
    let lossy = RecoveryPolicy {
        on_lost: OnLost::AppendMissing,
        ..RecoveryPolicy::default()
    };
    let mangled = translate_all(records, &annotator, &mangler, lossy)?;
    let truncating = FnBackend::new("truncating", move |text| {
        let full = LexiconTranslator::default().translate_text(text);
        let keep = full.chars().count().div_ceil(2);
        Ok(full.chars().take(keep).collect())
    });
    let truncated = translate_all(records, &annotator, &truncating, lossy)?;
    let identity = translate_all(records, &annotator, &IdentityTranslator, RecoveryPolicy::default())?;

    let references: Vec<&str> = records.iter().map(|r| r.target_cs.as_str()).collect();
    let sources: Vec<&str> = records.iter().map(|r| r.source_en.as_str()).collect();
    let dice = DiceProvider::default();
    let mut outputs: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    outputs.insert(HUMAN, references.iter().map(|s| s.to_string()).collect());
    for (name, set) in [
        (SYSTEMS[1], &translated),
        (SYSTEMS[2], &mangled),
        (SYSTEMS[3], &truncated),
        (SYSTEMS[4], &identity),
    ] {
        outputs.insert(name, set.iter().map(|r| r.target_cs.clone()).collect());
    }
    let evaluation = SYSTEMS[1..]
        .iter()
        .map(|name| evaluate_corpus(name, &outputs[name], &references, &sources, Some(&dice), &seg))
        .collect::<Result<Vec<_>, _>>()?;

    let filtered = datapipe::filter(&translated, &dice, cfg.threshold)?;

    let test_set: Vec<TestItem> = records
        .iter()
        .enumerate()
        .map(|(i, r)| TestItem {
            item_id: r.id.clone(),
            source_en: r.source_en.clone(),
            outputs: SYSTEMS.iter().map(|s| (s.to_string(), outputs[s][i].clone())).collect(),
        })
        .collect();
    let pool: Vec<String> = SYSTEMS.iter().map(|s| s.to_string()).collect();
    let questionnaire = build_questionnaire(&test_set, &pool, cfg.seed, &cfg.survey, 0)?;
    let reference_of: BTreeMap<&str, &str> = records.iter().map(|r| (r.id.as_str(), r.target_cs.as_str())).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut responses = Vec::with_capacity(cfg.respondents);
    for k in 0..cfg.respondents {
        let careless = k < cfg.careless;
        let rankings = questionnaire
            .questions
            .iter()
            .map(|q| QuestionRanking {
                question_id: q.question_id.clone(),
                ranking: if careless {
                    q.candidates.iter().map(|c| c.candidate_id.clone()).collect()
                } else {
                    noisy_ranking(q, reference_of[q.item_id.as_str()], &mut rng)
                },
            })
            .collect();
        let total_secs = if careless {
            rng.gen_range(60.0..200.0)
        } else {
            rng.gen_range(240.0..900.0)
        };
        let sub = ResponseSubmission {
            questionnaire_id: questionnaire.id.clone(),
            respondent_id: format!("resp{k:02}"),
            rankings,
            durations: Durations {
                total_secs,
                per_question_secs: BTreeMap::new(),
            },
        };
        responses.push(validate_response(&sub, &questionnaire, &cfg.survey)?);
    }
    responses.shuffle(&mut rng);

    let questionnaires = BTreeMap::from([(questionnaire.id.clone(), questionnaire.clone())]);
    let export = export_outcomes(&responses, &questionnaires, true)?;
    let board = leaderboard(&initial_ratings(SYSTEMS), &export.outcomes)?;

    Ok(DryRunReport {
        records: records.len(),
        translated,
        chunks_aligned,
        chunk_mismatches,
        evaluation,
        filter_kept: filtered.kept.len(),
        filter_rejected: filtered.rejected.len(),
        questionnaire,
        responses: responses.len(),
        accepted: export.responses,
        outcomes: export.outcomes.len(),
        leaderboard: board,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datapipe::Provenance;

    fn corpus() -> Vec<ParallelRecord> {
        (0..12)
            .map(|i| {
                ParallelRecord::new(
                    format!("d{i}"),
                    format!("The patient has pneumonia and fever for {i} days."),
                    format!("ผู้ป่วยมี pneumonia และมีไข้เป็นเวลา {i} วัน"),
                    Provenance::Human,
                )
            })
            .collect()
    }

    #[test]
    fn deterministic_and_complete() {
        let cfg = DryRunConfig::default();
        let a = dry_run(&corpus(), &cfg).unwrap();
        let b = dry_run(&corpus(), &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.translated.len(), 12);
        assert_eq!(a.evaluation.len(), 4);
        assert_eq!(a.responses, 12);
        assert_eq!(a.accepted, 10);
        assert_eq!(a.outcomes, 10 * 10 * 10);
        assert_eq!(a.leaderboard.len(), 5);
        assert_eq!(a.leaderboard[0].system_id, HUMAN);
    }
}
