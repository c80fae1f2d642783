use std::path::PathBuf;

use clap::Args;
use log::info;
use trendspam_core::evaluate::gen_synthetic_corpus;
use trendspam_core::hunter::write_edges;
use trendspam_core::ingestion::{write_corpus, write_snapshot_store};
use trendspam_core::labeling::{write_evidence, write_labels};
use trendspam_core::AccountClass;

use super::{write_with, CliResult};
use crate::config::PipelineConfig;
use crate::output::{create_dir, write_text};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Spammer accounts.
    #[arg(long, default_value_t = 200, value_name = "N")]
    spammers: usize,
    /// Legitimate accounts.
    #[arg(long, default_value_t = 200, value_name = "N")]
    legit: usize,
    /// Compromised accounts.
    #[arg(long, default_value_t = 0, value_name = "N")]
    compromised: usize,
    /// Generator seed (default: seeds.synth from the config).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output directory; created if missing.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

pub fn synth(args: &SynthArgs, config: &PipelineConfig) -> CliResult {
    let seed = args.seed.unwrap_or(config.seeds.synth);
    let corpus = gen_synthetic_corpus(args.spammers, args.legit, args.compromised, seed)?;
    create_dir(&args.out)?;
    let dir = &args.out;
    write_with(&dir.join("corpus.jsonl"), |w| write_corpus(w, &corpus.snapshots))?;
    write_with(&dir.join("snapshots.jsonl"), |w| write_snapshot_store(w, &corpus.snapshots))?;
    write_with(&dir.join("catalog.csv"), |w| corpus.catalog.write(w))?;
    write_text(&dir.join("dictionary.txt"), &corpus.dictionary.to_text())?;
    write_with(&dir.join("labels.jsonl"), |w| write_labels(w, &corpus.labels))?;
    write_with(&dir.join("evidence.jsonl"), |w| write_evidence(w, &corpus.evidence))?;
    let mut answers = String::new();
    for a in &corpus.answers {
        answers.push_str(&serde_json::to_string(a).map_err(trendspam_core::Error::from)?);
        answers.push('\n');
    }
    write_text(&dir.join("answers.jsonl"), &answers)?;
    write_with(&dir.join("edges.csv"), |w| write_edges(w, &corpus.edges))?;
    let mut spammers = String::new();
    for l in corpus.labels.iter().filter(|l| l.class == AccountClass::Spammer) {
        spammers.push_str(&l.account_id);
        spammers.push('\n');
    }
    write_text(&dir.join("spammers.txt"), &spammers)?;
    info!(
        "wrote {} accounts ({} answers, {} edges) to {}",
        corpus.snapshots.len(),
        corpus.answers.len(),
        corpus.edges.len(),
        dir.display()
    );
    Ok(())
}
