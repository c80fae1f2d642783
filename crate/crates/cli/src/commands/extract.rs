use std::path::PathBuf;

use clap::Args;
use log::info;
use trendspam_core::features::{catalog_manifest, extract_all, write_feature_file, ExtractorConfig};
use trendspam_core::ingestion::read_snapshot_store;
use trendspam_core::SpamDictionary;

use super::{required_path, write_with, CliResult};
use crate::config::PipelineConfig;
use crate::output::write_text;

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Snapshot store.
    #[arg(long, value_name = "PATH")]
    snapshots: Option<PathBuf>,
    /// Spam dictionary, one term per line.
    #[arg(long, visible_alias = "dictionary", value_name = "PATH")]
    dict: Option<PathBuf>,
    /// Feature file to write (one JSON record per account).
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Similarity above which two tweets count as replicates.
    #[arg(long, value_name = "X")]
    duplicate_threshold: Option<f64>,
    /// Also write the versioned feature catalog manifest here.
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

pub fn extractor_config(flag: Option<f64>, config: &PipelineConfig) -> CliResult<ExtractorConfig> {
    let t = flag.unwrap_or(config.thresholds.duplicate);
    if !(0.0..=1.0).contains(&t) {
        return Err(super::CliError::Usage(format!("duplicate threshold {t} is outside [0, 1]")));
    }
    Ok(ExtractorConfig { duplicate_threshold: t })
}

pub fn extract(args: &ExtractArgs, config: &PipelineConfig) -> CliResult {
    let snapshots = read_snapshot_store(&required_path(&args.snapshots, &config.paths.snapshots, "snapshots")?)?;
    let dict = SpamDictionary::load(&required_path(&args.dict, &config.paths.dictionary, "dictionary")?)?;
    let vectors = extract_all(&snapshots, &dict, &extractor_config(args.duplicate_threshold, config)?)?;
    write_with(&args.out, |w| write_feature_file(w, &vectors))?;
    if let Some(path) = &args.manifest {
        write_text(path, &catalog_manifest())?;
    }
    info!("wrote features for {} accounts to {}", vectors.len(), args.out.display());
    Ok(())
}
