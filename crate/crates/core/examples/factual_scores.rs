//! Aggregate expert band scores: the median per evaluator, then the mean.

use medcs::rating::{factual_aggregate, read_sheets_csv, ScoreBand};

const SHEETS: &str = "\
evaluator_id,system_id,score
md_a,mask,5
md_a,mask,4
md_a,mask,4.5
md_a,plain,3
md_a,plain,3.5
md_b,mask,6.5
md_b,mask,6.5
md_b,plain,4
md_b,plain,5
";

fn main() {
    let sheets = read_sheets_csv(SHEETS.as_bytes()).expect("well-formed sheet csv");
    let scores = factual_aggregate(&sheets, &ScoreBand::default(), true).expect("scores in band");
    let mut rows: Vec<_> = scores.into_iter().collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("Model | Factual");
    for (system, score) in rows {
        println!("{system} | {score:.3}");
    }
}
