use std::collections::HashMap;
use std::fs::File;
use std::path::PathBuf;

use clap::Args;
use log::{info, warn};
use trendspam_core::hunter::{hunt as run_hunt, read_edges, write_hunt_csv, Classifier, CorpusEdges, HuntLimits};
use trendspam_core::ingestion::read_snapshot_store;
use trendspam_core::{AccountSnapshot, Error, SpamDictionary};

use super::extract::extractor_config;
use super::learn::load_model;
use super::{read_lines, required_path, write_with, CliError, CliResult};
use crate::config::PipelineConfig;

#[derive(Debug, Args)]
pub struct HuntArgs {
    /// Model file.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Snapshot store of candidate accounts.
    #[arg(long, value_name = "PATH")]
    snapshots: Option<PathBuf>,
    /// Spam dictionary.
    #[arg(long, visible_alias = "dictionary", value_name = "PATH")]
    dict: Option<PathBuf>,
    /// Follower graph CSV (`follower_id,followee_id`).
    #[arg(long, value_name = "PATH")]
    edges: Option<PathBuf>,
    /// Seed account ids, one per line.
    #[arg(long, value_name = "PATH")]
    seeds: PathBuf,
    /// Expansion depth limit (seeds are depth 0).
    #[arg(long, value_name = "N")]
    max_depth: Option<usize>,
    /// Cap on distinct accounts ever queued, seeds included.
    #[arg(long, value_name = "N")]
    max_accounts: Option<usize>,
    /// Similarity above which two tweets count as replicates.
    #[arg(long, value_name = "X")]
    duplicate_threshold: Option<f64>,
    /// Hunt results CSV.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

pub fn hunt(args: &HuntArgs, config: &PipelineConfig) -> CliResult {
    let model = load_model(&args.model, config)?;
    let snapshots = read_snapshot_store(&required_path(&args.snapshots, &config.paths.snapshots, "snapshots")?)?;
    let dict = SpamDictionary::load(&required_path(&args.dict, &config.paths.dictionary, "dictionary")?)?;
    let edges_path = required_path(&args.edges, &config.paths.edges, "edges")?;
    let edges_file = File::open(&edges_path).map_err(|e| Error::Io {
        path: edges_path.clone(),
        source: e,
    })?;
    let edges = read_edges(edges_file, &edges_path)?;
    let seeds = read_lines(&args.seeds)?;
    if seeds.is_empty() {
        return Err(CliError::Usage(format!("{}: no seed ids", args.seeds.display())));
    }
    let limits = HuntLimits {
        max_depth: args.max_depth.unwrap_or(config.hunt.max_depth),
        max_accounts: args.max_accounts.unwrap_or(config.hunt.max_accounts),
    };
    if limits.max_accounts == 0 {
        return Err(CliError::Usage("--max-accounts must be positive".into()));
    }
    let provider = CorpusEdges::new(&snapshots, &edges);
    let store: HashMap<String, AccountSnapshot> =
        snapshots.into_iter().map(|s| (s.account_id.clone(), s)).collect();
    let classifier = Classifier {
        model: &model,
        dictionary: &dict,
        extractor: extractor_config(args.duplicate_threshold, config)?,
    };
    let report = run_hunt(&seeds, &provider, &classifier, &store, limits)?;
    for (id, msg) in &report.expansion_errors {
        warn!("could not expand {id}: {msg}");
    }
    if !report.unresolved.is_empty() {
        warn!("{} accounts could not be classified", report.unresolved.len());
    }
    write_with(&args.out, |w| write_hunt_csv(w, &report))?;
    info!(
        "visited {} accounts, {} detected as spammer",
        report.entries.len(),
        report.detections().count()
    );
    Ok(())
}
