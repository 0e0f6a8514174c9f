use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod wiring;

use wiring::Fake;

/// Fixed default so repeated runs reproduce each other.
pub const DEFAULT_SEED: u64 = 20240;

#[derive(Parser)]
#[command(name = "medcs", version, about = "Code-switched English-Thai medical translation toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// TOML file with one table per backend role. Roles left out use offline fakes.
    #[arg(long, global = true)]
    pub backend_config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Treat lost placeholders and quarantined records as failures.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Fake used for the translator when none is configured.
    #[arg(long, global = true, value_enum, default_value_t = Fake::Lexicon)]
    pub fake: Fake,
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Annotate keywords and replace them with placeholders.
    Mask(commands::IoArgs),
    /// Produce code-switched translations of `source_en`.
    Translate(commands::TranslateArgs),
    /// Split record pairs into aligned chunks.
    Chunk(commands::ChunkArgs),
    /// Score system outputs against references.
    Eval(commands::EvalArgs),
    /// Keep records whose quality score meets the threshold.
    Filter(commands::FilterArgs),
    /// Add rephrased and back-translated records.
    Augment(commands::IoArgs),
    /// Corpus statistics.
    Stats(commands::StatsArgs),
    /// Glicko leaderboard from survey games, plus factual score means.
    Rate(commands::RateArgs),
    /// Run the ranking survey service.
    Serve(commands::ServeArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_target(false)
        .with_ansi(std::io::stderr().is_terminal())
        .with_max_level(if cli.global.verbose {
            tracing::Level::DEBUG
        } else {
            tracing::Level::INFO
        })
        .init();
    let g = &cli.global;
    let result = match cli.command {
        Command::Mask(a) => commands::mask(g, a),
        Command::Translate(a) => commands::translate(g, a),
        Command::Chunk(a) => commands::chunk(g, a),
        Command::Eval(a) => commands::eval(g, a),
        Command::Filter(a) => commands::filter(g, a),
        Command::Augment(a) => commands::augment(g, a),
        Command::Stats(a) => commands::stats(g, a),
        Command::Rate(a) => commands::rate(g, a),
        Command::Serve(a) => commands::serve(g, a),
    };
    match result {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_ERROR)
        }
    }
}
