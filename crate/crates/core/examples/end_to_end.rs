//! Run the whole toolkit offline on a JSONL corpus of English sources and
//! code-switched references.
//!
//! cargo run --example end_to_end -- crates/core/tests/fixtures/e2e_50.jsonl

use std::fs::File;

use medcs::datapipe::read_jsonl;
use medcs::dryrun::{dry_run, DryRunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/e2e_50.jsonl").into());
    let records = read_jsonl(File::open(path)?)?;
    let report = dry_run(&records, &DryRunConfig::default())?;

    println!("{} records, {} chunks aligned, {} mismatched", report.records, report.chunks_aligned, report.chunk_mismatches.len());
    println!("filter: {} kept, {} rejected", report.filter_kept, report.filter_rejected);
    for e in &report.evaluation {
        if let Some(a) = &e.aggregates {
            println!("{:<18} csF1 {:.3}  BLEU {:.3}  chrF {:.3}  WER {:.3}", e.system_id, a.cs_f1, a.bleu, a.chrf, a.wer);
        }
    }
    println!("questionnaire {}: {}/{} responses accepted, {} games", report.questionnaire.id, report.accepted, report.responses, report.outcomes);
    for row in &report.leaderboard {
        println!("{:<18} {:>8.2} ± {:.2}", row.system_id, row.rating, 2.0 * row.rd);
    }
    Ok(())
}
