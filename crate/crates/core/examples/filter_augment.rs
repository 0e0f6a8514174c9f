//! Grow a parallel corpus by rephrasing, then keep only faithful pairs.

use std::collections::HashSet;

use medcs::backends::fake::{FnBackend, IdentityTranslator};
use medcs::datapipe::{augment_batch, filter, stats, ParallelRecord, Provenance, DEFAULT_THRESHOLD};
use medcs::metrics::DiceProvider;
use medcs::textseg::SegmenterConfig;

fn main() {
    let corpus = vec![
        ParallelRecord::new("r1", "CT scan shows nodule", "CT scan พบ nodule", Provenance::Pseudo),
        ParallelRecord::new("r2", "Give insulin now", "ให้ insulin ทันที", Provenance::Pseudo),
        ParallelRecord::new("r3", "fever and cough", "fever and cough", Provenance::Pseudo),
    ];

    // Stand-ins for LLM calls: reorder words, then "back-translate" verbatim.
    let rephraser = FnBackend::new("reverse", |s| Ok(s.split(' ').rev().collect::<Vec<_>>().join(" ")));
    let existing: HashSet<String> = corpus.iter().map(|r| r.id.clone()).collect();
    let mut grown = corpus.clone();
    for result in augment_batch(&corpus, &existing, &rephraser, &IdentityTranslator, 2) {
        match result {
            Ok(r) => grown.push(r),
            Err(e) => eprintln!("skipped: {e}"),
        }
    }

    let out = filter(&grown, &DiceProvider::default(), DEFAULT_THRESHOLD).expect("valid threshold");
    for r in &out.kept {
        println!("keep {:<8} {:.3}  {} -> {}", r.id, r.scores["dice"], r.source_en, r.target_cs);
    }
    for r in &out.rejected {
        println!("drop {:<8} {:.3}  {} -> {}", r.id, r.scores["dice"], r.source_en, r.target_cs);
    }
    let s = stats(&out.kept, &SegmenterConfig::default());
    println!("{s:?}");
}
