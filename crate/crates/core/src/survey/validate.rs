use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use super::{Questionnaire, ResponseSubmission, SurveyConfig, SurveyError, SurveyResponse, Validity};

/// Discordant pairs over `n(n-1)/2`, for two permutations of `0..n`.
pub fn kendall_tau_distance(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "permutations differ in length");
    let n = a.len();
    if n < 2 {
        return 0.0;
    }
    let mut pos_b = vec![0; n];
    for (i, &x) in b.iter().enumerate() {
        pos_b[x] = i;
    }
    let mut discordant = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if pos_b[a[i]] > pos_b[a[j]] {
                discordant += 1;
            }
        }
    }
    discordant as f64 / (n * (n - 1) / 2) as f64
}

/// Mean distance over all pairs of same-length orderings. With fewer than two
/// comparable orderings there is nothing to compare and the result is 1.
pub fn mean_ordering_distance(orderings: &[Vec<usize>]) -> f64 {
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..orderings.len() {
        for j in i + 1..orderings.len() {
            if orderings[i].len() == orderings[j].len() {
                sum += kendall_tau_distance(&orderings[i], &orderings[j]);
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        1.0
    } else {
        sum / pairs as f64
    }
}

fn response_id(sub: &ResponseSubmission) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(sub).expect("submission serializes"));
    format!("rs-{}", &hex::encode(h.finalize())[..16])
}

/// Checks a submission is complete and computes its validity flags.
///
/// Each ranking is turned into the display positions of the chosen
/// candidates, best first. A respondent who clicks the same slots on every
/// question produces near-identical position orderings.
pub fn validate_response(
    sub: &ResponseSubmission,
    questionnaire: &Questionnaire,
    cfg: &SurveyConfig,
) -> Result<SurveyResponse, SurveyError> {
    let incomplete = |m: String| Err(SurveyError::IncompleteResponse(m));
    if sub.questionnaire_id != questionnaire.id {
        return Err(SurveyError::UnknownQuestionnaire(sub.questionnaire_id.clone()));
    }
    if sub.respondent_id.trim().is_empty() {
        return incomplete("empty respondent_id".into());
    }
    if !sub.durations.total_secs.is_finite() || sub.durations.total_secs < 0.0 {
        return incomplete(format!("invalid total duration {}", sub.durations.total_secs));
    }
    let mut by_question = BTreeMap::new();
    for r in &sub.rankings {
        if by_question.insert(r.question_id.as_str(), r).is_some() {
            return incomplete(format!("question {} ranked twice", r.question_id));
        }
    }
    let mut orderings = Vec::with_capacity(questionnaire.questions.len());
    for q in &questionnaire.questions {
        let Some(r) = by_question.remove(q.question_id.as_str()) else {
            return incomplete(format!("question {} not ranked", q.question_id));
        };
        let shown: BTreeSet<&str> = q.candidates.iter().map(|c| c.candidate_id.as_str()).collect();
        let given: BTreeSet<&str> = r.ranking.iter().map(String::as_str).collect();
        if r.ranking.len() != q.candidates.len() || given != shown {
            return incomplete(format!(
                "ranking for {} is not a permutation of its candidates",
                q.question_id
            ));
        }
        orderings.push(
            r.ranking
                .iter()
                .map(|id| {
                    q.candidates
                        .iter()
                        .position(|c| c.candidate_id == *id)
                        .expect("checked above")
                })
                .collect::<Vec<_>>(),
        );
    }
    if let Some(extra) = by_question.keys().next() {
        return incomplete(format!("question {extra} is not in the questionnaire"));
    }

    let distance = mean_ordering_distance(&orderings);
    let time_flag = sub.durations.total_secs < cfg.min_duration_secs;
    let ordering_flag = distance < cfg.similarity_threshold;
    Ok(SurveyResponse {
        response_id: response_id(sub),
        questionnaire_id: sub.questionnaire_id.clone(),
        respondent_id: sub.respondent_id.clone(),
        rankings: sub.rankings.clone(),
        durations: sub.durations.clone(),
        validity: Validity {
            time_flag,
            ordering_flag,
            mean_ordering_distance: distance,
            accepted: !(time_flag && ordering_flag),
            override_accepted: None,
        },
    })
}
