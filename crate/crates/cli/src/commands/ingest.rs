use std::path::PathBuf;

use clap::Args;
use log::{info, warn};
use serde::Serialize;
use trendspam_core::ingestion::{
    expand_urls, parse_corpus, read_snapshot_store, source_activity_report, write_snapshot_store, Blacklist,
    HttpResolver, MockResolver, ParseOptions, SourceCatalog, UrlResolver, DEFAULT_MAX_HOPS,
};
use trendspam_core::AccountSnapshot;

use super::{read_text, required_path, write_with, CliError, CliResult};
use crate::config::PipelineConfig;

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Line-delimited corpus dump (profile and tweet records).
    #[arg(long, value_name = "PATH")]
    corpus: Option<PathBuf>,
    /// Snapshot store to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Fail on the first malformed line instead of skipping it.
    #[arg(long)]
    strict: bool,
    /// Resolve every URL to its final redirect target.
    #[arg(long)]
    expand_urls: bool,
    /// Offline redirect table (`from,to` CSV) used instead of live HTTP.
    #[arg(long, value_name = "PATH", requires = "expand_urls")]
    redirects: Option<PathBuf>,
    /// Hostname blacklist, one per line.
    #[arg(long, value_name = "PATH")]
    blacklist: Option<PathBuf>,
    /// Redirect hops followed per URL.
    #[arg(long, default_value_t = DEFAULT_MAX_HOPS, value_name = "N")]
    max_hops: u32,
    /// Write URL resolutions as JSON lines here.
    #[arg(long, value_name = "PATH", requires = "expand_urls")]
    resolutions: Option<PathBuf>,
}

pub fn ingest(args: &IngestArgs, config: &PipelineConfig) -> CliResult {
    let corpus = required_path(&args.corpus, &config.paths.corpus, "corpus")?;
    let mut parsed = parse_corpus(&corpus, ParseOptions { strict: args.strict })?;
    let w = &parsed.warnings;
    if w.total() > 0 {
        warn!(
            "skipped {} malformed lines, {} duplicate tweets, {} duplicate profiles; {} accounts lacked a profile",
            w.malformed_lines, w.duplicate_tweets, w.duplicate_profiles, w.accounts_without_profile
        );
    }
    if args.expand_urls {
        let blacklist = match args.blacklist.as_ref().or(config.paths.blacklist.as_ref()) {
            Some(p) => Blacklist::load(p)?,
            None => Blacklist::default(),
        };
        let resolver: Box<dyn UrlResolver> = match &args.redirects {
            Some(p) => Box::new(MockResolver::from_csv(&read_text(p)?)?),
            None => Box::new(HttpResolver::default()),
        };
        let resolutions = expand_urls(&mut parsed.snapshots, resolver.as_ref(), &blacklist, args.max_hops);
        let failed = resolutions.iter().filter(|r| r.transport_error.is_some()).count();
        let flagged = resolutions.iter().filter(|r| r.blacklisted).count();
        info!("resolved {} URLs ({failed} with errors, {flagged} blacklisted)", resolutions.len());
        if let Some(path) = &args.resolutions {
            write_with(path, |w| {
                for r in &resolutions {
                    serde_json::to_writer(&mut *w, r)?;
                    writeln!(w).map_err(|e| trendspam_core::Error::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                }
                Ok(())
            })?;
        }
    } else if args.blacklist.is_some() {
        return Err(CliError::Usage("--blacklist only applies with --expand-urls".into()));
    }
    write_with(&args.out, |w| write_snapshot_store(w, &parsed.snapshots))?;
    info!("wrote {} snapshots to {}", parsed.snapshots.len(), args.out.display());
    Ok(())
}

#[derive(Debug, Args)]
pub struct SourcesReportArgs {
    /// Corpus dump to report on.
    #[arg(long, value_name = "PATH", conflicts_with = "snapshots")]
    corpus: Option<PathBuf>,
    /// Snapshot store to report on, instead of a corpus dump.
    #[arg(long, value_name = "PATH")]
    snapshots: Option<PathBuf>,
    /// Source catalog CSV (`source_name,category,notes`).
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Report CSV; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ShareRow<'a> {
    source_name: &'a str,
    category: &'a str,
    tweet_count: u64,
    share: f64,
}

pub fn sources_report(args: &SourcesReportArgs, config: &PipelineConfig) -> CliResult {
    let snapshots: Vec<AccountSnapshot> = match (&args.corpus, &args.snapshots) {
        (_, Some(p)) => read_snapshot_store(p)?,
        (Some(p), None) => parse_corpus(p, ParseOptions::default())?.snapshots,
        (None, None) => match (&config.paths.corpus, &config.paths.snapshots) {
            (_, Some(p)) => read_snapshot_store(p)?,
            (Some(p), None) => parse_corpus(p, ParseOptions::default())?.snapshots,
            (None, None) => return Err(CliError::Usage("missing --corpus or --snapshots".into())),
        },
    };
    let catalog = SourceCatalog::load(&required_path(&args.catalog, &config.paths.catalog, "catalog")?)?;
    let rows = source_activity_report(&snapshots, &catalog);
    let render = |w: &mut dyn std::io::Write| -> trendspam_core::Result<()> {
        let mut csv = csv::Writer::from_writer(w);
        let err = |e: csv::Error| trendspam_core::Error::Input(format!("writing report: {e}"));
        for r in &rows {
            csv.serialize(ShareRow {
                source_name: &r.source_name,
                category: r.category.as_str(),
                tweet_count: r.tweet_count,
                share: r.share,
            })
            .map_err(err)?;
        }
        if rows.is_empty() {
            csv.write_record(["source_name", "category", "tweet_count", "share"]).map_err(err)?;
        }
        csv.flush().map_err(|e| trendspam_core::Error::Input(format!("writing report: {e}")))
    };
    match &args.out {
        Some(path) => write_with(path, render),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            render(&mut lock)?;
            Ok(())
        }
    }
}
