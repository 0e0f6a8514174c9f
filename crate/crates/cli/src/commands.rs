use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use medcs::backends::map_bounded;
use medcs::datapipe::{self, ParallelRecord, Provenance, DEFAULT_THRESHOLD};
use medcs::masking::{mask_text, translate_masked, MaskStep, OnLost, RecoveryPolicy};
use medcs::metrics::{evaluate_corpus, write_summary_csv, EvaluationReport};
use medcs::rating::{
    factual_aggregate, initial_ratings, leaderboard, read_sheets_csv, write_leaderboard_csv, PairwiseOutcome,
    read_ratings_csv, ScoreBand,
};
use medcs::survey::{read_test_set, SurveyConfig, SurveyExport, SurveyService, SurveyStore};
use medcs::textseg::{self, SegmenterConfig, DEFAULT_MAX_TOKENS};
use serde::Deserialize;

use crate::wiring::Backends;
use crate::Global;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
/// Alignment mismatches, or lost placeholders and quarantines under `--strict`.
pub const EXIT_REJECTED: u8 = 2;

#[derive(Args)]
pub struct IoArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Input holds `mask` output instead of records.
    #[arg(long)]
    pub masked: bool,
}

#[derive(Args)]
pub struct ChunkArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_TOKENS)]
    pub max_tokens: usize,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Records whose `target_cs` is the reference.
    #[arg(long)]
    pub references: PathBuf,
    /// `NAME=PATH` of records whose `target_cs` is that system's output.
    #[arg(long = "system", required = true, value_parser = parse_system)]
    pub systems: Vec<(String, PathBuf)>,
    /// Directory for `summary.csv`, `segments.csv` and `report.json`.
    #[arg(long)]
    pub output: PathBuf,
    /// Fill the semantic column with the Dice stand-in when no scorer is configured.
    #[arg(long)]
    pub dice: bool,
}

#[derive(Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Where rejected and quarantined records go.
    #[arg(long)]
    pub rejected: Option<PathBuf>,
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Also write the rows as JSON.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RateArgs {
    /// Survey export JSON, or a JSON array of `{winner, loser}` games.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// CSV `system_id,r,rd` of starting ratings; others start fresh.
    #[arg(long)]
    pub ratings: Option<PathBuf>,
    /// Extra systems to list even without games.
    #[arg(long, value_delimiter = ',')]
    pub systems: Vec<String>,
    /// Factual score CSV `evaluator_id,system_id,score`.
    #[arg(long)]
    pub sheets: Option<PathBuf>,
    /// Leaderboard CSV; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// JSON lines of `{item_id, source_en, outputs: {system_id: text}}`.
    #[arg(long)]
    pub test_set: PathBuf,
    /// Directory for the questionnaire and response journals.
    #[arg(long)]
    pub store: PathBuf,
    /// Default system pool; every system with full coverage when absent.
    #[arg(long, value_delimiter = ',')]
    pub pool: Vec<String>,
    #[arg(long)]
    pub force_human: bool,
}

fn parse_system(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected NAME=PATH, got {s:?}")),
    }
}

fn require_file(path: &Path) -> Result<()> {
    ensure!(path.is_file(), "input file not found: {}", path.display());
    Ok(())
}

fn load_records(path: &Path) -> Result<Vec<ParallelRecord>> {
    require_file(path)?;
    datapipe::load(path).with_context(|| format!("reading {}", path.display()))
}

fn save_records(records: &[ParallelRecord], path: &Path) -> Result<()> {
    datapipe::save(records, path).with_context(|| format!("writing {}", path.display()))
}

fn write_json_lines<T: serde::Serialize>(items: &[T], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn policy(g: &Global) -> RecoveryPolicy {
    RecoveryPolicy {
        on_lost: if g.strict { OnLost::Fail } else { OnLost::AppendMissing },
        ..RecoveryPolicy::default()
    }
}

pub fn mask(g: &Global, a: IoArgs) -> Result<u8> {
    let records = load_records(&a.input)?;
    let backends = Backends::load(g.backend_config.as_deref(), g.seed, g.fake)?;
    let annotator = backends.annotator()?;
    let todo: Vec<&ParallelRecord> = records.iter().filter(|r| !r.is_draft()).collect();
    let results = map_bounded(&todo, 4, |r| mask_text(&r.id, &r.source_en, annotator.as_ref()));
    let mut steps = Vec::new();
    let mut failed = 0;
    for (r, res) in todo.iter().zip(results) {
        match res {
            Ok(s) => steps.push(s),
            Err(e) => {
                failed += 1;
                tracing::error!(id = %r.id, error = %e, "mask failed");
            }
        }
    }
    write_json_lines(&steps, &a.output)?;
    tracing::info!(masked = steps.len(), failed, "mask done");
    Ok(if failed > 0 { EXIT_ERROR } else { EXIT_OK })
}

pub fn translate(g: &Global, a: TranslateArgs) -> Result<u8> {
    let backends = Backends::load(g.backend_config.as_deref(), g.seed, g.fake)?;
    let steps: Vec<Result<MaskStep, String>> = if a.masked {
        require_file(&a.io.input)?;
        let text = std::fs::read_to_string(&a.io.input).with_context(|| format!("reading {}", a.io.input.display()))?;
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let step: MaskStep = serde_json::from_str(line)
                .with_context(|| format!("{} line {}", a.io.input.display(), i + 1))?;
            steps.push(Ok(step));
        }
        steps
    } else {
        let records = load_records(&a.io.input)?;
        let annotator = backends.annotator()?;
        let todo: Vec<&ParallelRecord> = records.iter().filter(|r| !r.is_draft()).collect();
        map_bounded(&todo, 4, |r| {
            mask_text(&r.id, &r.source_en, annotator.as_ref()).map_err(|e| format!("{}: {e}", r.id))
        })
    };
    let (translator, workers) = backends.translator()?;
    let policy = policy(g);
    let results = map_bounded(&steps, workers, |s| match s {
        Ok(step) => translate_masked(step, translator.as_ref(), policy).map_err(|e| format!("{}: {e}", step.id)),
        Err(e) => Err(e.clone()),
    });
    let mut out = Vec::new();
    let (mut failed, mut lost) = (0, 0);
    for res in results {
        match res {
            Ok(r) => {
                let recovery = r.meta.get("recovery").and_then(|v| v.as_array());
                if recovery.is_some_and(|v| v.iter().any(|x| x["status"] == "lost")) {
                    lost += 1;
                }
                out.push(r);
            }
            Err(e) => {
                failed += 1;
                tracing::error!(error = %e, "translate failed");
            }
        }
    }
    save_records(&out, &a.io.output)?;
    tracing::info!(translated = out.len(), failed, lost_placeholders = lost, "translate done");
    Ok(if failed > 0 {
        EXIT_ERROR
    } else if g.strict && lost > 0 {
        EXIT_REJECTED
    } else {
        EXIT_OK
    })
}

pub fn chunk(_g: &Global, a: ChunkArgs) -> Result<u8> {
    let records = load_records(&a.io.input)?;
    let cfg = SegmenterConfig::default();
    let mut out = Vec::new();
    let mut mismatched = Vec::new();
    for r in records.iter().filter(|r| !r.is_draft()) {
        let src = textseg::chunk(&r.source_en, &cfg, a.max_tokens).with_context(|| format!("chunking {}", r.id))?;
        let tgt = textseg::chunk(&r.target_cs, &cfg, a.max_tokens).with_context(|| format!("chunking {}", r.id))?;
        tracing::debug!(id = %r.id, source = src.len(), target = tgt.len(), "chunked");
        if !textseg::validate_alignment(&src, &tgt).is_aligned() {
            tracing::warn!(id = %r.id, source = src.len(), target = tgt.len(), "chunk count mismatch");
            mismatched.push(r.id.clone());
            continue;
        }
        let single = src.len() == 1;
        for (s, t) in src.into_iter().zip(tgt) {
            let id = if single { r.id.clone() } else { format!("{}#{}", r.id, s.index) };
            let mut c = ParallelRecord::new(id, s.text.trim(), t.text.trim(), r.provenance);
            c.scores = r.scores.clone();
            c.meta = r.meta.clone();
            if !single {
                c.meta.insert("parent".into(), r.id.clone().into());
                c.meta.insert("chunk".into(), s.index.into());
            }
            out.push(c);
        }
    }
    save_records(&out, &a.io.output)?;
    tracing::info!(chunks = out.len(), mismatched = mismatched.len(), "chunk done");
    Ok(if mismatched.is_empty() { EXIT_OK } else { EXIT_REJECTED })
}

pub fn eval(g: &Global, a: EvalArgs) -> Result<u8> {
    let refs = load_records(&a.references)?;
    for (_, path) in &a.systems {
        require_file(path)?;
    }
    let backends = Backends::load(g.backend_config.as_deref(), g.seed, g.fake)?;
    let scorer = backends.scorer(a.dice)?;
    let cfg = SegmenterConfig::default();
    let mut reports: Vec<EvaluationReport> = Vec::new();
    for (name, path) in &a.systems {
        let outputs: BTreeMap<String, String> = load_records(path)?
            .into_iter()
            .map(|r| (r.id, r.target_cs))
            .collect();
        let hyps = refs
            .iter()
            .map(|r| {
                outputs
                    .get(&r.id)
                    .cloned()
                    .with_context(|| format!("{} has no output for {}", path.display(), r.id))
            })
            .collect::<Result<Vec<_>>>()?;
        let references: Vec<&str> = refs.iter().map(|r| r.target_cs.as_str()).collect();
        let sources: Vec<&str> = refs.iter().map(|r| r.source_en.as_str()).collect();
        let report = evaluate_corpus(name, &hyps, &references, &sources, scorer.as_deref(), &cfg)
            .with_context(|| format!("evaluating {name}"))?;
        reports.push(report);
    }
    std::fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    write_summary_csv(&reports, File::create(a.output.join("summary.csv"))?)?;
    let mut segments = Vec::new();
    for r in &reports {
        r.write_segments_csv(&mut segments)?;
    }
    std::fs::write(a.output.join("segments.csv"), dedup_headers(&segments))?;
    std::fs::write(a.output.join("report.json"), serde_json::to_string_pretty(&reports)?)?;
    for r in &reports {
        if let Some(agg) = &r.aggregates {
            println!(
                "{} | cs_f1 {:.4} | bleu {:.2} | chrf {:.2} | cer {:.4} | wer {:.4}",
                r.system_id, agg.cs_f1, agg.bleu, agg.chrf, agg.cer, agg.wer
            );
        }
    }
    Ok(EXIT_OK)
}

/// Concatenated CSVs repeat the header; keep the first.
fn dedup_headers(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes);
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let mut out = format!("{header}\n");
    for l in lines.filter(|l| *l != header) {
        out.push_str(l);
        out.push('\n');
    }
    out
}

pub fn filter(g: &Global, a: FilterArgs) -> Result<u8> {
    let records = load_records(&a.io.input)?;
    let backends = Backends::load(g.backend_config.as_deref(), g.seed, g.fake)?;
    let scorer = backends.scorer(true)?.expect("dice fallback");
    let outcome = datapipe::filter(&records, scorer.as_ref(), a.threshold)?;
    save_records(&outcome.kept, &a.io.output)?;
    if let Some(path) = &a.rejected {
        let mut out = outcome.rejected.clone();
        for q in &outcome.quarantined {
            let mut r = q.record.clone();
            r.meta.insert("filter_error".into(), q.error.clone().into());
            out.push(r);
        }
        save_records(&out, path)?;
    }
    for q in &outcome.quarantined {
        tracing::warn!(id = %q.record.id, error = %q.error, "quarantined");
    }
    tracing::info!(
        kept = outcome.kept.len(),
        rejected = outcome.rejected.len(),
        quarantined = outcome.quarantined.len(),
        scorer = scorer.id(),
        "filter done"
    );
    Ok(if g.strict && !outcome.quarantined.is_empty() {
        EXIT_REJECTED
    } else {
        EXIT_OK
    })
}

pub fn augment(g: &Global, a: IoArgs) -> Result<u8> {
    let records = load_records(&a.input)?;
    let backends = Backends::load(g.backend_config.as_deref(), g.seed, g.fake)?;
    let (rephraser, workers) = backends.rephraser()?;
    let back = backends.back_translator()?;
    let parents: Vec<ParallelRecord> = records
        .iter()
        .filter(|r| !r.is_draft() && r.provenance != Provenance::Augmented)
        .cloned()
        .collect();
    let existing: HashSet<String> = records.iter().map(|r| r.id.clone()).collect();
    let results = datapipe::augment_batch(&parents, &existing, rephraser.as_ref(), back.as_ref(), workers);
    let mut out = records;
    let mut failed = 0;
    for res in results {
        match res {
            Ok(r) => out.push(r),
            Err(e) => {
                failed += 1;
                tracing::error!(error = %e, "augment failed");
            }
        }
    }
    save_records(&out, &a.output)?;
    tracing::info!(records = out.len(), failed, "augment done");
    Ok(if failed > 0 { EXIT_ERROR } else { EXIT_OK })
}

pub fn stats(_g: &Global, a: StatsArgs) -> Result<u8> {
    let cfg = SegmenterConfig::default();
    let mut rows = Vec::new();
    for path in &a.input {
        rows.push((path.display().to_string(), datapipe::stats(&load_records(path)?, &cfg)));
    }
    println!("File | {}", datapipe::DatasetStats::HEADER);
    for (name, s) in &rows {
        println!("{name} | {s}");
    }
    if rows.len() > 1 {
        let total = rows.iter().map(|(_, s)| *s).fold(datapipe::DatasetStats::default(), |acc, s| acc + s);
        println!("Total | {total}");
    }
    if let Some(out) = &a.output {
        let json: BTreeMap<&str, &datapipe::DatasetStats> = rows.iter().map(|(n, s)| (n.as_str(), s)).collect();
        std::fs::write(out, serde_json::to_string_pretty(&json)?)?;
    }
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GamesFile {
    Export(SurveyExport),
    Games(Vec<PairwiseOutcome>),
}

pub fn rate(_g: &Global, a: RateArgs) -> Result<u8> {
    let games = match &a.input {
        Some(path) => {
            require_file(path)?;
            let text = std::fs::read_to_string(path)?;
            match serde_json::from_str::<GamesFile>(&text).with_context(|| format!("parsing {}", path.display()))? {
                GamesFile::Export(e) => e.outcomes,
                GamesFile::Games(g) => g,
            }
        }
        None => Vec::new(),
    };
    let mut initial = initial_ratings(
        a.systems
            .iter()
            .map(String::as_str)
            .chain(games.iter().flat_map(|g| [g.winner.as_str(), g.loser.as_str()])),
    );
    if let Some(path) = &a.ratings {
        require_file(path)?;
        let given = read_ratings_csv(File::open(path)?).with_context(|| format!("reading {}", path.display()))?;
        initial.extend(given);
    }
    if initial.is_empty() && a.sheets.is_none() {
        bail!("nothing to rate: give --input, --systems, --ratings or --sheets");
    }
    if !initial.is_empty() {
        let rows = leaderboard(&initial, &games)?;
        match &a.output {
            Some(path) => write_leaderboard_csv(&rows, File::create(path)?)?,
            None => write_leaderboard_csv(&rows, std::io::stdout().lock())?,
        }
        tracing::info!(systems = rows.len(), games = games.len(), "rated");
    }
    if let Some(path) = &a.sheets {
        require_file(path)?;
        let sheets = read_sheets_csv(File::open(path)?)?;
        let means = factual_aggregate(&sheets, &ScoreBand::with_zero(), false)?;
        let mut by_score: Vec<(&String, &f64)> = means.iter().collect();
        by_score.sort_by(|x, y| y.1.total_cmp(x.1).then_with(|| x.0.cmp(y.0)));
        println!("Model | Factual");
        for (system, score) in by_score {
            println!("{system} | {score:.3}");
        }
    }
    Ok(EXIT_OK)
}

pub fn serve(_g: &Global, a: ServeArgs) -> Result<u8> {
    require_file(&a.test_set)?;
    let test_set = read_test_set(File::open(&a.test_set)?)?;
    let default_pool = if a.pool.is_empty() {
        SurveyService::pool_from_test_set(&test_set)
    } else {
        a.pool
    };
    let svc = Arc::new(SurveyService {
        store: SurveyStore::open(&a.store)?,
        test_set,
        default_pool,
        config: SurveyConfig {
            force_include_human: a.force_human,
            ..SurveyConfig::default()
        },
    });
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind((a.host.as_str(), a.port)).await?;
        println!("listening on http://{}", listener.local_addr()?);
        medcs::survey::server::serve(listener, svc).await
    })?;
    Ok(EXIT_OK)
}
