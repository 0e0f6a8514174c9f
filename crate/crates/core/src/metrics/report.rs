use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bleu::{segment_bleu_stats, BleuStats, DEFAULT_MAX_N};
use super::chrf::{segment_chrf_stats, ChrfStats, DEFAULT_BETA, DEFAULT_CHAR_ORDER};
use super::{
    cer, check_lengths, content_tokens, cs_f1, meteor_lite, wer, MetricError, ScoreError, ScoreProvider,
};
use crate::textseg::SegmenterConfig;

/// Per-segment column order for CSV export.
pub const SEGMENT_COLUMNS: [&str; 9] = [
    "system_id", "segment", "cs_f1", "bleu", "chrf", "cer", "wer", "sem", "meteor",
];

/// Corpus summary column order for CSV export.
pub const SUMMARY_COLUMNS: [&str; 11] = [
    "system_id",
    "support",
    "cs_f1",
    "bleu",
    "chrf",
    "cer",
    "wer",
    "sem",
    "meteor",
    "bleu_micro",
    "chrf_micro",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub name: String,
    pub value: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentScores {
    pub segment: usize,
    pub cs_precision: f64,
    pub cs_recall: f64,
    pub cs_f1: f64,
    pub bleu: f64,
    pub chrf: f64,
    pub cer: f64,
    pub wer: f64,
    pub sem: Option<f64>,
    pub meteor: f64,
}

/// Macro means of the per-segment columns plus pooled (micro) BLEU and chrF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusAggregates {
    pub support: usize,
    pub cs_f1: f64,
    pub bleu: f64,
    pub chrf: f64,
    pub cer: f64,
    pub wer: f64,
    pub sem: Option<f64>,
    pub meteor: f64,
    pub bleu_micro: f64,
    pub chrf_micro: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub system_id: String,
    /// Identity of the semantic score provider, when one was configured.
    pub provider: Option<String>,
    pub segments: Vec<SegmentScores>,
    /// Absent for an empty corpus.
    pub aggregates: Option<CorpusAggregates>,
}

/// Mean that does not depend on input order: values are summed in sorted
/// order so permuting segments leaves the result bit-identical.
pub fn order_free_mean(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum::<f64>() / values.len() as f64
}

struct ScoredSegment {
    scores: SegmentScores,
    bleu: BleuStats,
    chrf: ChrfStats,
}

fn score_segment(
    index: usize,
    hypothesis: &str,
    reference: &str,
    source: &str,
    provider: Option<&dyn ScoreProvider>,
    cfg: &SegmenterConfig,
) -> Result<ScoredSegment, MetricError> {
    let at = |e: MetricError| MetricError::Segment {
        index,
        source: Box::new(e),
    };
    let cs = cs_f1(hypothesis, reference, cfg);
    let bleu = segment_bleu_stats(
        &content_tokens(hypothesis, cfg),
        &content_tokens(reference, cfg),
        DEFAULT_MAX_N,
    );
    let chrf = segment_chrf_stats(hypothesis, reference, DEFAULT_CHAR_ORDER);
    let sem = match provider {
        Some(p) => {
            let value = p.score(source, hypothesis, Some(reference)).map_err(|e| at(e.into()))?;
            if !(0.0..=1.0).contains(&value) {
                return Err(at(ScoreError::OutOfRange {
                    provider: p.id().to_string(),
                    value,
                }
                .into()));
            }
            Some(value)
        }
        None => None,
    };
    Ok(ScoredSegment {
        scores: SegmentScores {
            segment: index,
            cs_precision: cs.precision,
            cs_recall: cs.recall,
            cs_f1: cs.f1,
            bleu: bleu.score(),
            chrf: chrf.score(DEFAULT_BETA),
            cer: cer(hypothesis, reference).map_err(at)?,
            wer: wer(hypothesis, reference, cfg).map_err(at)?,
            sem,
            meteor: meteor_lite(hypothesis, reference, cfg),
        },
        bleu,
        chrf,
    })
}

/// Scores every segment of one system's output and aggregates the corpus.
///
/// Segments are scored in parallel; rows come back in input order.
pub fn evaluate_corpus<O, R, S>(
    system_id: &str,
    outputs: &[O],
    references: &[R],
    sources: &[S],
    provider: Option<&dyn ScoreProvider>,
    cfg: &SegmenterConfig,
) -> Result<EvaluationReport, MetricError>
where
    O: AsRef<str> + Sync,
    R: AsRef<str> + Sync,
    S: AsRef<str> + Sync,
{
    check_lengths(outputs.len(), references.len())?;
    check_lengths(outputs.len(), sources.len())?;

    let scored: Vec<ScoredSegment> = (0..outputs.len())
        .into_par_iter()
        .map(|i| {
            score_segment(
                i,
                outputs[i].as_ref(),
                references[i].as_ref(),
                sources[i].as_ref(),
                provider,
                cfg,
            )
        })
        .collect::<Result<_, _>>()?;

    let aggregates = (!scored.is_empty()).then(|| {
        let col = |f: fn(&SegmentScores) -> f64| order_free_mean(scored.iter().map(|s| f(&s.scores)).collect());
        let mut bleu = BleuStats::default();
        let mut chrf = ChrfStats::default();
        for s in &scored {
            bleu = merge_bleu(bleu, &s.bleu);
            chrf = merge_chrf(chrf, &s.chrf);
        }
        CorpusAggregates {
            support: scored.len(),
            cs_f1: col(|s| s.cs_f1),
            bleu: col(|s| s.bleu),
            chrf: col(|s| s.chrf),
            cer: col(|s| s.cer),
            wer: col(|s| s.wer),
            sem: provider.map(|_| col(|s| s.sem.unwrap_or_default())),
            meteor: col(|s| s.meteor),
            bleu_micro: bleu.score(),
            chrf_micro: chrf.score(DEFAULT_BETA),
        }
    });

    Ok(EvaluationReport {
        system_id: system_id.to_string(),
        provider: provider.map(|p| p.id().to_string()),
        segments: scored.into_iter().map(|s| s.scores).collect(),
        aggregates,
    })
}

fn merge_bleu(mut acc: BleuStats, other: &BleuStats) -> BleuStats {
    if acc.matches.is_empty() {
        return other.clone();
    }
    for n in 0..acc.matches.len() {
        acc.matches[n] += other.matches[n];
        acc.totals[n] += other.totals[n];
    }
    acc.hyp_len += other.hyp_len;
    acc.ref_len += other.ref_len;
    acc
}

fn merge_chrf(mut acc: ChrfStats, other: &ChrfStats) -> ChrfStats {
    if acc.hyp.is_empty() {
        return other.clone();
    }
    for n in 0..acc.hyp.len() {
        acc.hyp[n] += other.hyp[n];
        acc.reference[n] += other.reference[n];
        acc.matches[n] += other.matches[n];
    }
    acc
}

fn fmt_value(v: f64) -> String {
    format!("{v:.6}")
}

impl EvaluationReport {
    /// Corpus aggregates as named values, in export column order.
    pub fn metric_values(&self) -> Vec<MetricValue> {
        let Some(a) = &self.aggregates else {
            return Vec::new();
        };
        let mut out = vec![
            ("cs_f1", Some(a.cs_f1)),
            ("bleu", Some(a.bleu)),
            ("chrf", Some(a.chrf)),
            ("cer", Some(a.cer)),
            ("wer", Some(a.wer)),
            ("sem", a.sem),
            ("meteor", Some(a.meteor)),
            ("bleu_micro", Some(a.bleu_micro)),
            ("chrf_micro", Some(a.chrf_micro)),
        ];
        out.retain(|(_, v)| v.is_some());
        out.into_iter()
            .map(|(name, v)| MetricValue {
                name: name.to_string(),
                value: v.unwrap_or_default(),
                support: a.support,
            })
            .collect()
    }

    pub fn write_segments_csv<W: Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(SEGMENT_COLUMNS)?;
        for s in &self.segments {
            w.write_record([
                self.system_id.clone(),
                s.segment.to_string(),
                fmt_value(s.cs_f1),
                fmt_value(s.bleu),
                fmt_value(s.chrf),
                fmt_value(s.cer),
                fmt_value(s.wer),
                s.sem.map(fmt_value).unwrap_or_default(),
                fmt_value(s.meteor),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

/// One summary row per system. Systems with an empty corpus get support 0
/// and blank metric fields.
pub fn write_summary_csv<W: Write>(reports: &[EvaluationReport], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SUMMARY_COLUMNS)?;
    for r in reports {
        let row = match &r.aggregates {
            Some(a) => vec![
                r.system_id.clone(),
                a.support.to_string(),
                fmt_value(a.cs_f1),
                fmt_value(a.bleu),
                fmt_value(a.chrf),
                fmt_value(a.cer),
                fmt_value(a.wer),
                a.sem.map(fmt_value).unwrap_or_default(),
                fmt_value(a.meteor),
                fmt_value(a.bleu_micro),
                fmt_value(a.chrf_micro),
            ],
            None => {
                let mut row = vec![r.system_id.clone(), "0".to_string()];
                row.resize(SUMMARY_COLUMNS.len(), String::new());
                row
            }
        };
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::DiceProvider;

    #[test]
    fn identical_pair() {
        let cfg = SegmenterConfig::default();
        let r = evaluate_corpus("sys", &["ผู้ป่วยมี fever"], &["ผู้ป่วยมี fever"], &["The patient has fever"], None, &cfg)
            .unwrap();
        let a = r.aggregates.unwrap();
        assert_eq!((a.cs_f1, a.bleu, a.chrf, a.cer, a.wer), (1.0, 1.0, 1.0, 0.0, 0.0));
        assert_eq!(a.sem, None);
        assert_eq!(r.provider, None);
    }

    #[test]
    fn empty_corpus_has_no_aggregates() {
        let cfg = SegmenterConfig::default();
        let none: [&str; 0] = [];
        let r = evaluate_corpus("sys", &none, &none, &none, None, &cfg).unwrap();
        assert!(r.segments.is_empty());
        assert!(r.aggregates.is_none());
        assert!(r.metric_values().is_empty());
    }

    #[test]
    fn aggregates_are_hand_averages() {
        let cfg = SegmenterConfig::default();
        let outs = ["a b c", "CT scan", "x y"];
        let refs = ["a b d", "CT", "x y"];
        let r = evaluate_corpus("toy", &outs, &refs, &outs, Some(&DiceProvider::default()), &cfg).unwrap();
        let a = r.aggregates.clone().unwrap();
        // WER: 1/3, 1/1, 0 ; CER: 1/5, 5/2, 0
        assert!((a.wer - (1.0 / 3.0 + 1.0 + 0.0) / 3.0).abs() < 1e-15);
        assert!((a.cer - (0.2 + 2.5 + 0.0) / 3.0).abs() < 1e-15);
        // CS F1: {a,b,c}/{a,b,d} -> 2/3; {ct,scan}/{ct} -> 2/3; identity -> 1
        assert!((a.cs_f1 - (2.0 / 3.0 + 2.0 / 3.0 + 1.0) / 3.0).abs() < 1e-15);
        let mean_sem = r.segments.iter().map(|s| s.sem.unwrap()).sum::<f64>() / 3.0;
        assert!((a.sem.unwrap() - mean_sem).abs() < 1e-15);
        assert_eq!(r.provider.as_deref(), Some("dice"));
        assert_eq!(a.support, 3);
    }

    #[test]
    fn empty_reference_reports_segment() {
        let cfg = SegmenterConfig::default();
        let err = evaluate_corpus("s", &["a", "b"], &["a", ""], &["a", "b"], None, &cfg).unwrap_err();
        assert!(matches!(err, MetricError::Segment { index: 1, .. }));
    }

    #[test]
    fn csv_layout() {
        let cfg = SegmenterConfig::default();
        let r = evaluate_corpus("sys", &["a b"], &["a b"], &["a b"], None, &cfg).unwrap();
        let mut buf = Vec::new();
        r.write_segments_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "system_id,segment,cs_f1,bleu,chrf,cer,wer,sem,meteor\n\
             sys,0,1.000000,1.000000,1.000000,0.000000,0.000000,,0.937500\n"
        );
        let mut buf = Vec::new();
        write_summary_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("system_id,support,cs_f1,bleu,chrf,cer,wer,sem,meteor,bleu_micro,chrf_micro\n"));
    }
}
