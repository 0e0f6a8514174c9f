//! Serve the ranking survey over HTTP on a generated test set.
//!
//! cargo run --example survey_server
//! curl -XPOST localhost:8080/questionnaires -d '{"seed": 1}' -H 'content-type: application/json'

use std::collections::BTreeMap;
use std::sync::Arc;

use medcs::survey::server::serve;
use medcs::survey::{SurveyConfig, SurveyService, SurveyStore, TestItem};

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let systems = ["human", "mask", "plain", "nmt", "small", "tiny"];
    let test_set: Vec<TestItem> = (0..20)
        .map(|i| TestItem {
            item_id: format!("item{i}"),
            source_en: format!("The patient received {i} mg of insulin."),
            outputs: systems
                .iter()
                .map(|s| (s.to_string(), format!("[{s}] ผู้ป่วยได้รับ insulin {i} mg")))
                .collect::<BTreeMap<_, _>>(),
        })
        .collect();
    let dir = std::env::temp_dir().join("medcs-survey-example");
    let svc = SurveyService {
        store: SurveyStore::open(&dir).expect("writable journal dir"),
        default_pool: SurveyService::pool_from_test_set(&test_set),
        test_set,
        config: SurveyConfig::default(),
    };
    let listener = tokio::net::TcpListener::bind("127.0.0.1:8080").await?;
    println!("journals in {}", dir.display());
    println!("listening on http://{}", listener.local_addr()?);
    serve(listener, Arc::new(svc)).await
}
