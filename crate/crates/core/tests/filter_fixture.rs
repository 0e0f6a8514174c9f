use std::fs::File;

use medcs::datapipe::{filter, read_jsonl, DEFAULT_THRESHOLD};
use medcs::metrics::DiceProvider;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/filter_100.jsonl");
const EXPECTED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/filter_100_expected.csv");

#[derive(serde::Deserialize)]
struct Row {
    id: String,
    numerator: u32,
    denominator: u32,
    kept: bool,
}

#[test]
fn keeps_exactly_the_hand_scored_records() {
    let records = read_jsonl(File::open(DATA).unwrap()).unwrap();
    let expected: Vec<Row> = csv::Reader::from_path(EXPECTED).unwrap().deserialize().map(Result::unwrap).collect();
    assert_eq!(records.len(), 100);
    assert_eq!(expected.len(), 100);

    let out = filter(&records, &DiceProvider::default(), DEFAULT_THRESHOLD).unwrap();
    assert!(out.quarantined.is_empty());
    let kept: Vec<&str> = out.kept.iter().map(|r| r.id.as_str()).collect();
    let want: Vec<&str> = expected.iter().filter(|r| r.kept).map(|r| r.id.as_str()).collect();
    assert_eq!(kept, want);

    let boundary = expected.iter().filter(|r| r.numerator * 5 == r.denominator * 3).count();
    assert!(boundary > 0, "fixture must exercise the 0.6 boundary");

    for r in out.kept.iter().chain(&out.rejected) {
        let row = expected.iter().find(|e| e.id == r.id).unwrap();
        assert_eq!(r.scores["dice"], f64::from(row.numerator) / f64::from(row.denominator), "{}", r.id);
    }
}
