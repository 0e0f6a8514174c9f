use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Questionnaire, SurveyError, SurveyResponse};
use crate::rating::{rankings_to_pairwise, Decomposition, FactualScoreSheet, PairwiseOutcome, PreferenceRanking};

/// Survey results in the shapes the rating module consumes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SurveyExport {
    pub responses: usize,
    pub rankings: Vec<PreferenceRanking>,
    pub outcomes: Vec<PairwiseOutcome>,
    /// One sheet per response. A system ranked `k`-th of `n` scores `n - k + 1`.
    pub tallies: Vec<FactualScoreSheet>,
}

/// Maps candidate ids back to systems and expands every ranking into all
/// pairwise games. Output follows response order, then question order.
pub fn export_outcomes(
    responses: &[SurveyResponse],
    questionnaires: &BTreeMap<String, Questionnaire>,
    accepted_only: bool,
) -> Result<SurveyExport, SurveyError> {
    let mut out = SurveyExport::default();
    for resp in responses {
        if accepted_only && !resp.validity.is_accepted() {
            continue;
        }
        let qn = questionnaires
            .get(&resp.questionnaire_id)
            .ok_or_else(|| SurveyError::UnknownQuestionnaire(resp.questionnaire_id.clone()))?;
        let mut sheet = FactualScoreSheet::new(resp.respondent_id.clone());
        let per_question = resp.durations.total_secs / resp.rankings.len().max(1) as f64;
        for r in &resp.rankings {
            let question = qn.question(&r.question_id).ok_or_else(|| SurveyError::UnknownCandidate {
                question: r.question_id.clone(),
                candidate: r.ranking.first().cloned().unwrap_or_default(),
            })?;
            let systems = r
                .ranking
                .iter()
                .map(|cid| {
                    question
                        .candidates
                        .iter()
                        .find(|c| c.candidate_id == *cid)
                        .map(|c| c.system_id.clone())
                        .ok_or_else(|| SurveyError::UnknownCandidate {
                            question: r.question_id.clone(),
                            candidate: cid.clone(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let n = systems.len();
            for (k, s) in systems.iter().enumerate() {
                sheet.add(s.clone(), (n - k) as f64);
            }
            out.outcomes.extend(rankings_to_pairwise(&systems, Decomposition::AllPairs));
            out.rankings.push(PreferenceRanking {
                respondent_id: resp.respondent_id.clone(),
                question_id: r.question_id.clone(),
                ranking: systems,
                duration_secs: resp
                    .durations
                    .per_question_secs
                    .get(&r.question_id)
                    .copied()
                    .unwrap_or(per_question),
            });
        }
        out.tallies.push(sheet);
        out.responses += 1;
    }
    Ok(out)
}
