//! `trendspam`: command-line driver for the spammer-detection pipeline.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::PipelineConfig;

#[derive(Debug, Parser)]
#[command(name = "trendspam", version, about = "Spammer detection for trending-hashtag timelines")]
struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true, env = "TRENDSPAM_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    /// Worker threads (default: available parallelism). Outputs do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a line-delimited corpus dump into a snapshot store.
    Ingest(commands::ingest::IngestArgs),
    /// Tweet-source statistics.
    Sources {
        #[command(subcommand)]
        command: SourcesCommand,
    },
    /// Compute feature vectors for every snapshot.
    Extract(commands::extract::ExtractArgs),
    /// Build ground-truth account labels from evidence tweets.
    Label(commands::label::LabelArgs),
    /// Build a spam dictionary from spam tweet texts.
    Dict(commands::label::DictArgs),
    /// Train a classifier.
    Train(commands::learn::TrainArgs),
    /// Rank features and prune correlated ones.
    SelectFeatures(commands::learn::SelectArgs),
    /// Cross-validate classifiers and write a metrics report.
    Evaluate(commands::learn::EvaluateArgs),
    /// Classify accounts with a trained model.
    Classify(commands::learn::ClassifyArgs),
    /// Expand detected spammers through their followers and retweeters.
    Hunt(commands::hunt::HuntArgs),
    /// Generate a synthetic labeled corpus.
    Synth(commands::synth::SynthArgs),
}

#[derive(Debug, Subcommand)]
enum SourcesCommand {
    /// Per-source tweet counts and shares.
    Report(commands::ingest::SourcesReportArgs),
}

/// Flags shared by commands that pick a feature set.
#[derive(Debug, Clone, Args)]
pub struct FeatureSetArgs {
    /// Named feature set: `paper-selected` or `full`.
    #[arg(long, conflicts_with = "feature_list")]
    preset: Option<String>,
    /// File with one feature name per line.
    #[arg(long, value_name = "PATH")]
    feature_list: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), commands::CliError> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(commands::CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| commands::CliError::Usage(format!("thread pool: {e}")))?;
    }
    let config = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    use Command::*;
    match cli.command {
        Ingest(a) => commands::ingest::ingest(&a, &config),
        Sources {
            command: SourcesCommand::Report(a),
        } => commands::ingest::sources_report(&a, &config),
        Extract(a) => commands::extract::extract(&a, &config),
        Label(a) => commands::label::label(&a, &config),
        Dict(a) => commands::label::dict(&a, &config),
        Train(a) => commands::learn::train(&a, &config),
        SelectFeatures(a) => commands::learn::select(&a, &config),
        Evaluate(a) => commands::learn::evaluate(&a, &config),
        Classify(a) => commands::learn::classify(&a, &config),
        Hunt(a) => commands::hunt::hunt(&a, &config),
        Synth(a) => commands::synth::synth(&a, &config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_status())
        }
    }
}
