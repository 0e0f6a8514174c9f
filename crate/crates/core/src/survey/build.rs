use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{Candidate, Question, Questionnaire, SurveyConfig, SurveyError, TestItem};

fn questionnaire_id(test_set: &[TestItem], pool: &[String], seed: u64, cfg: &SurveyConfig) -> String {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(serde_json::to_vec(cfg).expect("config serializes"));
    for s in pool {
        h.update(s.as_bytes());
        h.update([0]);
    }
    for item in test_set {
        h.update(item.item_id.as_bytes());
        h.update([0]);
    }
    format!("qn-{}", &hex::encode(h.finalize())[..16])
}

/// Samples `cfg.questions` items without replacement and, per question,
/// `cfg.candidates` systems from `pool` in shuffled display order.
///
/// The id depends only on the inputs, so the same seed, pool and test set
/// always give the same questionnaire.
pub fn build_questionnaire(
    test_set: &[TestItem],
    pool: &[String],
    seed: u64,
    cfg: &SurveyConfig,
    created_at: u64,
) -> Result<Questionnaire, SurveyError> {
    if cfg.questions == 0 || cfg.candidates < 2 {
        return Err(SurveyError::InvalidConfig(format!(
            "need at least 1 question and 2 candidates, got {} and {}",
            cfg.questions, cfg.candidates
        )));
    }
    let mut systems: Vec<String> = pool.to_vec();
    systems.sort();
    systems.dedup();
    if systems.len() != pool.len() {
        return Err(SurveyError::InvalidConfig("pool has duplicate systems".into()));
    }
    if systems.len() < cfg.candidates {
        return Err(SurveyError::PoolTooSmall {
            have: systems.len(),
            need: cfg.candidates,
        });
    }
    if cfg.force_include_human && !systems.contains(&cfg.human_system_id) {
        return Err(SurveyError::InvalidConfig(format!(
            "pool lacks human system {}",
            cfg.human_system_id
        )));
    }
    if test_set.len() < cfg.questions {
        return Err(SurveyError::TestSetTooSmall {
            have: test_set.len(),
            need: cfg.questions,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items: Vec<&TestItem> = test_set.choose_multiple(&mut rng, cfg.questions).collect();
    let mut questions = Vec::with_capacity(cfg.questions);
    for (i, item) in items.into_iter().enumerate() {
        let mut chosen: Vec<&String> = if cfg.force_include_human {
            let others: Vec<&String> = systems.iter().filter(|s| **s != cfg.human_system_id).collect();
            let mut v: Vec<&String> = others.choose_multiple(&mut rng, cfg.candidates - 1).copied().collect();
            v.push(&cfg.human_system_id);
            v
        } else {
            systems.choose_multiple(&mut rng, cfg.candidates).collect()
        };
        chosen.shuffle(&mut rng);
        let candidates = chosen
            .into_iter()
            .enumerate()
            .map(|(j, system)| {
                let text = item.outputs.get(system).ok_or_else(|| SurveyError::MissingOutput {
                    item: item.item_id.clone(),
                    system: system.clone(),
                })?;
                Ok(Candidate {
                    candidate_id: format!("q{i}c{j}"),
                    system_id: system.clone(),
                    text: text.clone(),
                })
            })
            .collect::<Result<Vec<_>, SurveyError>>()?;
        questions.push(Question {
            question_id: format!("q{i}"),
            item_id: item.item_id.clone(),
            source_en: item.source_en.clone(),
            candidates,
        });
    }
    Ok(Questionnaire {
        id: questionnaire_id(test_set, pool, seed, cfg),
        seed,
        created_at,
        questions,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;

    pub(crate) fn systems(n: usize) -> Vec<String> {
        let mut v: Vec<String> = (1..n).map(|i| format!("sys{i}")).collect();
        v.push("human".into());
        v
    }

    pub(crate) fn test_set(items: usize, systems: &[String]) -> Vec<TestItem> {
        (0..items)
            .map(|i| TestItem {
                item_id: format!("item{i}"),
                source_en: format!("source {i}"),
                outputs: systems
                    .iter()
                    .map(|s| (s.clone(), format!("{s} output {i}")))
                    .collect::<BTreeMap<_, _>>(),
            })
            .collect()
    }

    #[test]
    fn shape_and_determinism() {
        let pool = systems(8);
        let ts = test_set(30, &pool);
        let cfg = SurveyConfig::default();
        let a = build_questionnaire(&ts, &pool, 7, &cfg, 0).unwrap();
        let b = build_questionnaire(&ts, &pool, 7, &cfg, 0).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.questions.len(), 10);
        let slots: usize = a.questions.iter().map(|q| q.candidates.len()).sum();
        assert_eq!(slots, 50);
        let items: BTreeSet<_> = a.questions.iter().map(|q| &q.item_id).collect();
        assert_eq!(items.len(), 10);
        for q in &a.questions {
            let ids: BTreeSet<_> = q.candidates.iter().map(|c| &c.system_id).collect();
            assert_eq!(ids.len(), 5);
            for c in &q.candidates {
                assert!(c.text.starts_with(&c.system_id));
            }
        }
        let c = build_questionnaire(&ts, &pool, 8, &cfg, 0).unwrap();
        assert_ne!(a.id, c.id);
        assert_ne!(a.questions, c.questions);
    }

    #[test]
    fn pool_of_five_shows_everyone() {
        let pool = systems(5);
        let q = build_questionnaire(&test_set(10, &pool), &pool, 1, &SurveyConfig::default(), 0).unwrap();
        let all: BTreeSet<&String> = pool.iter().collect();
        for question in &q.questions {
            let shown: BTreeSet<&String> = question.candidates.iter().map(|c| &c.system_id).collect();
            assert_eq!(shown, all);
        }
    }

    #[test]
    fn force_human() {
        let pool = systems(12);
        let cfg = SurveyConfig {
            force_include_human: true,
            ..SurveyConfig::default()
        };
        let q = build_questionnaire(&test_set(10, &pool), &pool, 3, &cfg, 0).unwrap();
        assert!(q
            .questions
            .iter()
            .all(|q| q.candidates.iter().filter(|c| c.system_id == "human").count() == 1));
    }

    #[test]
    fn errors() {
        let pool = systems(4);
        let cfg = SurveyConfig::default();
        assert_eq!(
            build_questionnaire(&test_set(10, &pool), &pool, 0, &cfg, 0),
            Err(SurveyError::PoolTooSmall { have: 4, need: 5 })
        );
        let pool = systems(5);
        assert_eq!(
            build_questionnaire(&test_set(9, &pool), &pool, 0, &cfg, 0),
            Err(SurveyError::TestSetTooSmall { have: 9, need: 10 })
        );
        let mut ts = test_set(10, &pool);
        ts[0].outputs.remove("sys1");
        ts[1].outputs.remove("sys1");
        assert!(matches!(
            build_questionnaire(&ts[..10], &pool, 0, &cfg, 0),
            Err(SurveyError::MissingOutput { .. })
        ));
    }

    #[test]
    fn blinded_view_hides_systems() {
        let pool = systems(6);
        let q = build_questionnaire(&test_set(10, &pool), &pool, 2, &SurveyConfig::default(), 0).unwrap();
        let json = serde_json::to_string(&q.blinded()).unwrap();
        assert!(!json.contains("system_id"));
        assert!(!json.contains("item_id"));
        assert_eq!(q.blinded().questions[3].candidates.len(), 5);
    }
}
