use std::io::BufReader;
use std::path::PathBuf;

use clap::Args;
use log::{info, warn};
use trendspam_core::ingestion::{read_snapshot_store, Blacklist, SourceCatalog};
use trendspam_core::labeling::{
    build_spam_dictionary, label_accounts, read_evidence, write_labels, HumanVerdictProvider, InteractiveOracle,
    Query, ScriptedOracle, SpamRules,
};
use trendspam_core::Error;

use super::{read_lines, required_path, write_with, CliError, CliResult};
use crate::config::PipelineConfig;
use crate::output::write_text;

/// Where human verdicts come from.
#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Replay answers from a JSON-lines script.
    #[arg(long, value_name = "PATH", conflicts_with = "interactive")]
    answers: Option<PathBuf>,
    /// Ask on the terminal (prompts on standard error, answers on standard input).
    #[arg(long)]
    interactive: bool,
    /// Name recorded as the labeler on every label.
    #[arg(long, value_name = "NAME")]
    labeler: Option<String>,
}

/// Provider used when no answer source was given: any question is an error.
struct NoOracle;

impl HumanVerdictProvider for NoOracle {
    fn answer(&self, query: &Query<'_>) -> trendspam_core::Result<String> {
        Err(Error::Protocol(format!(
            "question `{}` needs an answer source; pass --answers or --interactive",
            query.question.id()
        )))
    }

    fn labeler(&self) -> &str {
        "rules"
    }
}

/// Delegates to `inner`, overriding the recorded labeler name.
struct Named {
    inner: Box<dyn HumanVerdictProvider>,
    name: Option<String>,
}

impl HumanVerdictProvider for Named {
    fn answer(&self, query: &Query<'_>) -> trendspam_core::Result<String> {
        self.inner.answer(query)
    }

    fn labeler(&self) -> &str {
        self.name.as_deref().unwrap_or_else(|| self.inner.labeler())
    }

    fn concurrent(&self) -> bool {
        self.inner.concurrent()
    }
}

impl OracleArgs {
    fn build(&self, required: bool) -> CliResult<Named> {
        let inner: Box<dyn HumanVerdictProvider> = if let Some(p) = &self.answers {
            Box::new(ScriptedOracle::load(p)?)
        } else if self.interactive {
            let name = self.labeler.clone().unwrap_or_else(|| "interactive".into());
            Box::new(InteractiveOracle::new(
                BufReader::new(std::io::stdin()),
                std::io::stderr(),
                name,
            ))
        } else if required {
            return Err(CliError::Usage("pass --answers <script> or --interactive".into()));
        } else {
            Box::new(NoOracle)
        };
        Ok(Named {
            inner,
            name: self.labeler.clone(),
        })
    }
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Snapshot store.
    #[arg(long, value_name = "PATH")]
    snapshots: Option<PathBuf>,
    /// Source catalog CSV.
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Evidence tweets, one JSON record per account.
    #[arg(long, value_name = "PATH")]
    evidence: PathBuf,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Extra follower-selling phrases, one per line.
    #[arg(long, value_name = "PATH")]
    selling_terms: Option<PathBuf>,
    /// Hostname blacklist, one per line.
    #[arg(long, value_name = "PATH")]
    blacklist: Option<PathBuf>,
    /// Automated-source share above which an account is automated.
    #[arg(long, value_name = "X")]
    automation_threshold: Option<f64>,
    /// Labels file to write.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

pub fn label(args: &LabelArgs, config: &PipelineConfig) -> CliResult {
    let snapshots = read_snapshot_store(&required_path(&args.snapshots, &config.paths.snapshots, "snapshots")?)?;
    let catalog = SourceCatalog::load(&required_path(&args.catalog, &config.paths.catalog, "catalog")?)?;
    let evidence = read_evidence(&args.evidence)?;
    let out = required_path(&args.out, &config.paths.labels, "labels")?;
    let threshold = args.automation_threshold.unwrap_or(config.thresholds.automation);
    if !(0.0..=1.0).contains(&threshold) {
        return Err(CliError::Usage(format!("automation threshold {threshold} is outside [0, 1]")));
    }
    let mut rules = SpamRules::default();
    if let Some(p) = args.blacklist.as_ref().or(config.paths.blacklist.as_ref()) {
        rules.blacklist = Blacklist::load(p)?;
    }
    if let Some(p) = &args.selling_terms {
        rules.extend_terms(read_lines(p)?);
    }
    let oracle = args.oracle.build(false)?;
    let run = label_accounts(&snapshots, &evidence, &catalog, threshold, &rules, &oracle)?;
    if !run.without_evidence.is_empty() {
        warn!("{} accounts have no evidence and were not labeled", run.without_evidence.len());
    }
    write_with(&out, |w| write_labels(w, &run.labels))?;
    let spam = run.evidence.iter().filter(|l| l.is_spam()).count();
    println!(
        "spam fraction: {:.4} ({spam} of {} evidence tweets)",
        run.spam_fraction(),
        run.evidence.len()
    );
    info!("wrote {} labels to {}", run.labels.len(), out.display());
    Ok(())
}

#[derive(Debug, Args)]
pub struct DictArgs {
    /// Spam tweet texts, one per line.
    #[arg(long, value_name = "PATH")]
    texts: PathBuf,
    /// Minimum occurrences for a token to be offered for review.
    #[arg(long, default_value_t = 2, value_name = "N")]
    min_freq: usize,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Dictionary file to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

pub fn dict(args: &DictArgs, _config: &PipelineConfig) -> CliResult {
    let texts = read_lines(&args.texts)?;
    let oracle = args.oracle.build(true)?;
    let dictionary = build_spam_dictionary(&texts, args.min_freq, &oracle)?;
    write_text(&args.out, &dictionary.to_text())?;
    info!("wrote {} terms to {}", dictionary.len(), args.out.display());
    Ok(())
}
