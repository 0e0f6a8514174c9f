use std::io::{BufRead, BufReader};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use axum::routing::post;
use axum::{Json, Router};
use medcs::datapipe::{load, ParallelRecord, Provenance};
use serde_json::{json, Value};

fn medcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medcs")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_records(path: &Path, records: &[ParallelRecord]) {
    medcs::datapipe::save(records, path).unwrap();
}

fn sources() -> Vec<ParallelRecord> {
    [
        "Hyperinflation and air trapping on CT scan.",
        "The patient has insulin and paracetamol.",
        "Chest X-ray shows no consolidation.",
        "Check glucose before the next dose of insulin.",
    ]
    .iter()
    .enumerate()
    .map(|(i, s)| ParallelRecord::new(format!("s{i}"), *s, "", Provenance::Human))
    .collect()
}

fn p(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn identity_translation_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (input, direct, masked, via_mask) = (
        p(dir.path(), "in.jsonl"),
        p(dir.path(), "direct.jsonl"),
        p(dir.path(), "masked.jsonl"),
        p(dir.path(), "via.jsonl"),
    );
    write_records(&input, &sources());

    let o = medcs(&["translate", "--fake", "identity", "--input", s(&input), "--output", s(&direct)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = load(&direct).unwrap();
    assert_eq!(out.len(), 4);
    for (a, b) in out.iter().zip(sources()) {
        assert_eq!(a.target_cs, b.source_en);
        assert_eq!(a.provenance, Provenance::Pseudo);
    }
    assert_eq!(out[0].meta["keyword_count"], 3);

    assert_eq!(code(&medcs(&["mask", "--input", s(&input), "--output", s(&masked)])), 0);
    let first: Value = serde_json::from_str(std::fs::read_to_string(&masked).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(first["masked"]["masked"], "[[K0]] and [[K1]] on [[K2]].");
    let o = medcs(&["translate", "--masked", "--fake", "identity", "--input", s(&masked), "--output", s(&via_mask)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(load(&via_mask).unwrap(), out);
}

#[test]
fn lexicon_translation_keeps_keywords() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (p(dir.path(), "in.jsonl"), p(dir.path(), "out.jsonl"));
    write_records(&input, &sources()[..1]);
    assert_eq!(code(&medcs(&["translate", "--input", s(&input), "--output", s(&out)])), 0);
    assert_eq!(load(&out).unwrap()[0].target_cs, "Hyperinflation และ air trapping บน CT scan.");
}

#[test]
fn chunk_mismatch_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (p(dir.path(), "in.jsonl"), p(dir.path(), "out.jsonl"));
    write_records(
        &input,
        &[
            ParallelRecord::new("ok", "a b c d e f", "u v w x y z", Provenance::Human),
            ParallelRecord::new("bad", "a b c d e f g", "u v", Provenance::Human),
        ],
    );
    let o = medcs(&["chunk", "--max-tokens", "3", "--input", s(&input), "--output", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad"));
    let chunks = load(&out).unwrap();
    let ids: Vec<&str> = chunks.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, ["ok#0", "ok#1"]);
    assert_eq!(chunks[1].source_en, "d e f");
    assert_eq!(chunks[1].target_cs, "x y z");

    write_records(&input, &[ParallelRecord::new("ok", "a b c d e f", "u v w x y z", Provenance::Human)]);
    assert_eq!(code(&medcs(&["chunk", "--max-tokens", "3", "--input", s(&input), "--output", s(&out)])), 0);
}

#[test]
fn eval_identity_matches_golden_layout() {
    let dir = tempfile::tempdir().unwrap();
    let (refs, out) = (p(dir.path(), "refs.jsonl"), dir.path().join("report"));
    write_records(
        &refs,
        &[ParallelRecord::new("r0", "Give insulin to the patient now", "Give insulin to the patient now", Provenance::Human)],
    );
    let sys = format!("identity={}", s(&refs));
    let o = medcs(&["eval", "--references", s(&refs), "--system", &sys, "--output", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/identity_summary.csv"))
        .unwrap();
    assert_eq!(std::fs::read_to_string(out.join("summary.csv")).unwrap(), golden);
    let segments = std::fs::read_to_string(out.join("segments.csv")).unwrap();
    assert!(segments.starts_with("system_id,segment,cs_f1,bleu,chrf,cer,wer,sem,meteor\n"));
    assert!(out.join("report.json").is_file());
}

#[test]
fn eval_missing_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let refs = p(dir.path(), "refs.jsonl");
    write_records(&refs, &sources());
    let missing = p(dir.path(), "no_such_refs.jsonl");
    let sys = format!("a={}", s(&refs));
    let o = medcs(&["eval", "--references", s(&missing), "--system", &sys, "--output", s(dir.path())]);
    assert_ne!(code(&o), 0);
    assert!(stderr(&o).contains("no_such_refs.jsonl"));

    let sys = format!("a={}", s(&missing));
    let o = medcs(&["eval", "--references", s(&refs), "--system", &sys, "--output", s(dir.path())]);
    assert_ne!(code(&o), 0);
    assert!(stderr(&o).contains("no_such_refs.jsonl"));
}

#[test]
fn filter_keeps_the_threshold_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let (input, kept, rejected) = (p(dir.path(), "in.jsonl"), p(dir.path(), "kept.jsonl"), p(dir.path(), "rej.jsonl"));
    // Dice over 5 + 5 tokens: 3 shared gives 0.6, 2 shared gives 0.4.
    write_records(
        &input,
        &[
            ParallelRecord::new("edge", "alpha beta gamma delta epsilon", "alpha beta gamma zeta eta", Provenance::Pseudo),
            ParallelRecord::new("low", "alpha beta gamma delta epsilon", "alpha beta iota zeta eta", Provenance::Pseudo),
        ],
    );
    let o = medcs(&["filter", "--threshold", "0.6", "--input", s(&input), "--output", s(&kept), "--rejected", s(&rejected)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let k = load(&kept).unwrap();
    assert_eq!(k.len(), 1);
    assert_eq!(k[0].id, "edge");
    assert!((k[0].scores["dice"] - 0.6).abs() < 1e-12);
    assert_eq!(load(&rejected).unwrap()[0].id, "low");
}

#[test]
fn augment_doubles_records() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (p(dir.path(), "in.jsonl"), p(dir.path(), "out.jsonl"));
    let recs: Vec<ParallelRecord> = (0..5)
        .map(|i| ParallelRecord::new(format!("r{i}"), format!("text {i}"), format!("ข้อความ {i}"), Provenance::Pseudo))
        .collect();
    write_records(&input, &recs);
    assert_eq!(code(&medcs(&["augment", "--input", s(&input), "--output", s(&out)])), 0);
    let all = load(&out).unwrap();
    assert_eq!(all.len(), 10);
    assert_eq!(all[5].id, "r0+aug");
    assert_eq!(all[5].provenance, Provenance::Augmented);
}

#[test]
fn stats_match_hand_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = p(dir.path(), "in.jsonl");
    write_records(
        &input,
        &[
            ParallelRecord::new("a", "x", "ผู้ป่วย มี insulin. Take 2 doses.", Provenance::Pseudo),
            ParallelRecord::new("b", "y", "CT scan ปกติ", Provenance::Pseudo),
        ],
    );
    let o = medcs(&["stats", "--input", s(&input)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    // English: insulin, Take, doses, CT, scan = 5. Thai: ผู้ป่วย, มี, ปกติ = 3. Numeric: 2 = 1.
    // Sentences: a space between Thai characters also ends one, so "a" has
    // three and "b" one. Ratio 5 / 9 = 55.6%.
    assert!(stdout.lines().any(|l| l.ends_with("| 2 | 4 | 5 | 55.6%")), "{stdout}");
}

#[test]
fn rate_echoes_initial_ratings_without_games() {
    let o = medcs(&["rate", "--systems", "b,a"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        out,
        "system_id,rating,rd,ci_lo,ci_hi,games\n\
         a,1500.000000,350.000000,800.000000,2200.000000,0\n\
         b,1500.000000,350.000000,800.000000,2200.000000,0\n"
    );
}

#[test]
fn rate_reproduces_hand_oracle_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let (ratings, games, out) = (p(dir.path(), "r.csv"), p(dir.path(), "g.json"), p(dir.path(), "lb.csv"));
    std::fs::write(&ratings, "system_id,r,rd\np,1500,200\nx,1400,30\ny,1550,100\nz,1700,300\n").unwrap();
    std::fs::write(
        &games,
        json!([
            {"winner": "p", "loser": "x"},
            {"winner": "y", "loser": "p"},
            {"winner": "z", "loser": "p"}
        ])
        .to_string(),
    )
    .unwrap();
    let o = medcs(&["rate", "--input", s(&games), "--ratings", s(&ratings), "--output", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let p_row: Vec<&str> = csv.lines().find(|l| l.starts_with("p,")).unwrap().split(',').collect();
    let r: f64 = p_row[1].parse().unwrap();
    let rd: f64 = p_row[2].parse().unwrap();
    assert!((r - 1464.1).abs() < 0.1, "{r}");
    assert!((rd - 151.4).abs() < 0.1, "{rd}");
    let ratings: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(ratings.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn rate_prints_factual_means() {
    let dir = tempfile::tempdir().unwrap();
    let sheets = p(dir.path(), "f.csv");
    std::fs::write(
        &sheets,
        "evaluator_id,system_id,score\nmd1,A,4.5\nmd2,A,6.5\nmd3,A,5\nmd4,A,7\nmd1,B,5\nmd2,B,7\nmd3,B,6\nmd4,B,7\n",
    )
    .unwrap();
    let o = medcs(&["rate", "--sheets", s(&sheets)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "Model | Factual\nB | 6.250\nA | 5.750\n");
}

/// Translator that rejects two of the four fixture texts while `fail` is set.
fn flaky_translator(fail: Arc<std::sync::atomic::AtomicBool>, hits: Arc<AtomicUsize>) -> SocketAddr {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            tx.send(listener.local_addr().unwrap()).unwrap();
            let app = Router::new().route(
                "/",
                post(move |Json(body): Json<Value>| {
                    let (fail, hits) = (fail.clone(), hits.clone());
                    async move {
                        hits.fetch_add(1, Ordering::SeqCst);
                        let text = body["text"].as_str().unwrap_or_default().to_string();
                        if fail.load(Ordering::SeqCst) && (text.contains("patient") || text.contains("dose")) {
                            (axum::http::StatusCode::BAD_REQUEST, Json(json!({"error": "down"})))
                        } else {
                            (axum::http::StatusCode::OK, Json(json!({ "translation": text })))
                        }
                    }
                }),
            );
            axum::serve(listener, app).await.unwrap();
        });
    });
    rx.recv().unwrap()
}

#[test]
fn resume_skips_cached_backend_calls() {
    let dir = tempfile::tempdir().unwrap();
    let fail = Arc::new(std::sync::atomic::AtomicBool::new(true));
    let hits = Arc::new(AtomicUsize::new(0));
    let addr = flaky_translator(fail.clone(), hits.clone());
    let config = p(dir.path(), "backends.toml");
    std::fs::write(
        &config,
        format!(
            "cache_dir = {:?}\n\n[translator]\nendpoint = \"http://{addr}/\"\nmax_retries = 0\nrpm = 60000\n",
            s(&dir.path().join("cache"))
        ),
    )
    .unwrap();
    let (input, out) = (p(dir.path(), "in.jsonl"), p(dir.path(), "out.jsonl"));
    write_records(&input, &sources());

    let args = ["translate", "--backend-config", s(&config), "--input", s(&input), "--output", s(&out)];
    let o = medcs(&args);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert_eq!(hits.load(Ordering::SeqCst), 4);
    assert_eq!(load(&out).unwrap().len(), 2);

    fail.store(false, Ordering::SeqCst);
    let o = medcs(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(hits.load(Ordering::SeqCst), 6, "only the two failed records are re-sent");
    let done = load(&out).unwrap();
    assert_eq!(done.len(), 4);
    assert_eq!(done.iter().map(|r| r.meta["cache_hits"].as_u64().unwrap()).sum::<u64>(), 2);
}

struct Server(std::process::Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

#[test]
fn serve_round_trip_and_export_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let test_set = p(dir.path(), "items.jsonl");
    let systems = ["human", "a", "b", "c", "d", "e"];
    let lines: Vec<String> = (0..15)
        .map(|i| {
            let outputs: serde_json::Map<String, Value> =
                systems.iter().map(|s| (s.to_string(), json!(format!("{s} แปล {i}")))).collect();
            json!({"item_id": format!("i{i}"), "source_en": format!("text {i}"), "outputs": outputs}).to_string()
        })
        .collect();
    std::fs::write(&test_set, lines.join("\n")).unwrap();
    let store = dir.path().join("store");

    let mut child = Command::new(env!("CARGO_BIN_EXE_medcs"))
        .args(["serve", "--port", "0", "--test-set", s(&test_set), "--store", s(&store)])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let _server = Server(child);
    let base = line.trim().strip_prefix("listening on ").unwrap().to_string();
    let client = reqwest::blocking::Client::new();

    let health: Value = client.get(format!("{base}/health")).send().unwrap().json().unwrap();
    assert_eq!(health["status"], "ok");

    let q: Value = client
        .post(format!("{base}/questionnaires"))
        .json(&json!({"seed": 3}))
        .send()
        .unwrap()
        .json()
        .unwrap();
    let id = q["id"].as_str().unwrap();
    let got: Value = client.get(format!("{base}/questionnaires/{id}")).send().unwrap().json().unwrap();
    assert_eq!(got, q);
    assert!(!got.to_string().contains("system_id"));

    for (who, secs) in [("r1", 400.0), ("r2", 50.0)] {
        let rankings: Vec<Value> = q["questions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|question| {
                let ids: Vec<&Value> = question["candidates"].as_array().unwrap().iter().map(|c| &c["candidate_id"]).collect();
                json!({"question_id": question["question_id"], "ranking": ids})
            })
            .collect();
        let status = client
            .post(format!("{base}/responses"))
            .json(&json!({
                "questionnaire_id": id,
                "respondent_id": who,
                "rankings": rankings,
                "durations": {"total_secs": secs}
            }))
            .send()
            .unwrap()
            .status();
        assert_eq!(status.as_u16(), 201);
    }

    let online: Value = client.get(format!("{base}/export?accepted=true")).send().unwrap().json().unwrap();
    assert_eq!(online["outcomes"].as_array().unwrap().len(), 100);
    let journal = medcs::survey::SurveyStore::open(&store).unwrap();
    let offline = medcs::survey::export_outcomes(&journal.responses(), &journal.questionnaires(), true).unwrap();
    assert_eq!(serde_json::to_value(offline).unwrap(), online);
}
