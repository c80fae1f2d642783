use std::path::PathBuf;

use clap::Args;
use log::{info, warn};
use trendspam_core::evaluate::{cross_validate, write_predictions_csv, write_report_csv};
use trendspam_core::features::{extract_all, read_feature_file};
use trendspam_core::ingestion::read_snapshot_store;
use trendspam_core::labeling::read_labels;
use trendspam_core::learn::{predict, prune_ranked, rank_features, train as fit, RankMethod, TrainConfig};
use trendspam_core::{AccountClass, Algorithm, Dataset, FeatureVector, SpamDictionary, TrainedModel};

use super::extract::extractor_config;
use super::{feature_set, required_path, write_with, CliError, CliResult};
use crate::config::PipelineConfig;
use crate::output::write_text;
use crate::FeatureSetArgs;

/// Learner hyperparameters; unset flags fall back to the config file.
#[derive(Debug, Clone, Args)]
pub struct HyperArgs {
    /// Trees in a random forest.
    #[arg(long, value_name = "N")]
    n_trees: Option<usize>,
    /// Depth limit for trees.
    #[arg(long, value_name = "N")]
    max_depth: Option<usize>,
    /// Minimum samples per tree leaf.
    #[arg(long, value_name = "N")]
    min_leaf: Option<usize>,
    /// Features tried per forest split (default: square root of the feature count).
    #[arg(long, value_name = "N")]
    max_features: Option<usize>,
    /// AdaBoost rounds.
    #[arg(long, value_name = "N")]
    boost_rounds: Option<usize>,
}

impl HyperArgs {
    fn apply(&self, base: &TrainConfig) -> CliResult<TrainConfig> {
        let mut c = base.clone();
        if let Some(n) = self.n_trees {
            c.n_trees = n;
        }
        if self.max_depth.is_some() {
            c.max_depth = self.max_depth;
        }
        if let Some(n) = self.min_leaf {
            c.min_leaf = n;
        }
        if self.max_features.is_some() {
            c.max_features = self.max_features;
        }
        if let Some(n) = self.boost_rounds {
            c.boost_rounds = n;
        }
        if c.n_trees == 0 || c.min_leaf == 0 || c.max_features == Some(0) {
            return Err(CliError::Usage("--n-trees, --min-leaf and --max-features must be positive".into()));
        }
        Ok(c)
    }
}

/// Features joined with labels on account id.
fn load_dataset(
    features: &Option<PathBuf>,
    labels: &Option<PathBuf>,
    config: &PipelineConfig,
    names: Option<&[String]>,
) -> CliResult<Dataset> {
    let fpath = required_path(features, &config.paths.features, "features")?;
    let lpath = required_path(labels, &config.paths.labels, "labels")?;
    let vectors = read_feature_file(&fpath)?;
    let labels = read_labels(&lpath)?;
    let all: Vec<String>;
    let names = match names {
        Some(n) => n,
        None => {
            all = vectors
                .first()
                .map(|v| v.features.keys().cloned().collect())
                .unwrap_or_default();
            &all
        }
    };
    let (ds, report) = Dataset::join(&vectors, &labels, names)?;
    if !report.labels_without_features.is_empty() {
        warn!("{} labeled accounts have no features", report.labels_without_features.len());
    }
    if report.features_without_labels > 0 {
        warn!("{} feature records have no label", report.features_without_labels);
    }
    if ds.is_empty() {
        return Err(CliError::Usage(format!(
            "no account appears in both {} and {}",
            fpath.display(),
            lpath.display()
        )));
    }
    Ok(ds)
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Feature file.
    #[arg(long, value_name = "PATH")]
    features: Option<PathBuf>,
    /// Labels file.
    #[arg(long, value_name = "PATH")]
    labels: Option<PathBuf>,
    /// naive-bayes, decision-tree, random-forest or ada-boost.
    #[arg(long, value_name = "KIND")]
    algo: Algorithm,
    #[command(flatten)]
    set: FeatureSetArgs,
    /// Random seed (default: seeds.train from the config).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Model file to write.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

pub fn train(args: &TrainArgs, config: &PipelineConfig) -> CliResult {
    let (set_name, names) = feature_set(&args.set)?;
    let ds = load_dataset(&args.features, &args.labels, config, Some(&names))?;
    let out = required_path(&args.out, &config.paths.model, "model")?;
    let cfg = args.hyper.apply(&config.learn)?;
    let seed = args.seed.unwrap_or(config.seeds.train);
    let model = fit(&ds, args.algo, &cfg, seed)?;
    write_text(&out, &model.to_json()?)?;
    info!(
        "trained {} on {} accounts with {} features ({set_name}); wrote {}",
        args.algo,
        ds.len(),
        names.len(),
        out.display()
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Feature file.
    #[arg(long, value_name = "PATH")]
    features: Option<PathBuf>,
    /// Labels file.
    #[arg(long, value_name = "PATH")]
    labels: Option<PathBuf>,
    /// Ranking criterion: infogain or chi2.
    #[arg(long, default_value = "infogain", value_name = "METHOD")]
    method: RankMethod,
    /// Ranked features considered before correlation pruning.
    #[arg(long, value_name = "N")]
    top: Option<usize>,
    /// Absolute Pearson correlation above which a lower-ranked feature is dropped.
    #[arg(long, value_name = "X")]
    corr: Option<f64>,
    /// Equal-frequency bins used to discretize each feature.
    #[arg(long, value_name = "N")]
    bins: Option<usize>,
    /// Write the kept features as a feature list (usable with --feature-list).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

pub fn select(args: &SelectArgs, config: &PipelineConfig) -> CliResult {
    let ds = load_dataset(&args.features, &args.labels, config, None)?;
    let top = args.top.unwrap_or(config.thresholds.top_k);
    let corr = args.corr.unwrap_or(config.thresholds.corr);
    let bins = args.bins.unwrap_or(config.learn.bins);
    if top == 0 || !(corr > 0.0 && corr <= 1.0) {
        return Err(CliError::Usage("--top must be positive and --corr within (0, 1]".into()));
    }
    let ranking = rank_features(&ds, args.method, bins)?;
    let kept = prune_ranked(&ds, &ranking, top, corr)?;
    println!("rank\tfeature\t{}\tkept", args.method);
    for (i, (name, score)) in ranking.scores.iter().take(top).enumerate() {
        let k = if kept.contains(name) { "yes" } else { "no" };
        println!("{}\t{name}\t{score:.6}\t{k}", i + 1);
    }
    if let Some(path) = &args.out {
        let mut text = format!("# selected by {} top {top} corr {corr}\n", args.method);
        for n in &kept {
            text.push_str(n);
            text.push('\n');
        }
        write_text(path, &text)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Feature file.
    #[arg(long, value_name = "PATH")]
    features: Option<PathBuf>,
    /// Labels file.
    #[arg(long, value_name = "PATH")]
    labels: Option<PathBuf>,
    /// An algorithm name, or `all` for every algorithm.
    #[arg(long, default_value = "all", value_name = "KIND")]
    algo: String,
    #[command(flatten)]
    set: FeatureSetArgs,
    /// Cross-validation folds (default: evaluate.k from the config).
    #[arg(long, value_name = "N")]
    k: Option<usize>,
    /// Random seed for fold assignment and models (default: seeds.evaluate).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Metrics report CSV.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Also write every held-out prediction here.
    #[arg(long, value_name = "PATH")]
    predictions: Option<PathBuf>,
}

pub fn evaluate(args: &EvaluateArgs, config: &PipelineConfig) -> CliResult {
    let algorithms: Vec<Algorithm> = if args.algo == "all" {
        Algorithm::ALL.to_vec()
    } else {
        vec![args.algo.parse()?]
    };
    let (set_name, names) = feature_set(&args.set)?;
    let ds = load_dataset(&args.features, &args.labels, config, Some(&names))?;
    let cfg = args.hyper.apply(&config.learn)?;
    let k = args.k.unwrap_or(config.evaluate.k);
    let seed = args.seed.unwrap_or(config.seeds.evaluate);
    let mut reports = Vec::with_capacity(algorithms.len());
    for algo in algorithms {
        let r = cross_validate(&ds, algo, &set_name, &names, k, seed, &cfg)?;
        for w in &r.warnings {
            warn!("{algo}: {w}");
        }
        for f in r.folds.iter().filter(|f| f.error.is_some()) {
            warn!("{algo}: fold {} failed: {}", f.fold, f.error.as_deref().unwrap_or_default());
        }
        let m = &r.metrics;
        info!(
            "{algo}: f1 {:.4} recall {:.4} precision {:.4} fp_rate {:.4}",
            m.f1, m.recall, m.precision, m.fp_rate
        );
        let compromised = r.compromised_flagged();
        if compromised > 0 {
            info!("{algo}: {compromised} compromised accounts predicted spammer");
        }
        reports.push(r);
    }
    write_with(&args.out, |w| write_report_csv(w, &reports))?;
    if let Some(path) = &args.predictions {
        write_with(path, |w| write_predictions_csv(w, &reports))?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Model file.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Precomputed feature file.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["snapshots", "dict"])]
    features: Option<PathBuf>,
    /// Snapshot store to extract features from.
    #[arg(long, value_name = "PATH", requires = "dict")]
    snapshots: Option<PathBuf>,
    /// Spam dictionary, needed with --snapshots.
    #[arg(long, visible_alias = "dictionary", value_name = "PATH")]
    dict: Option<PathBuf>,
    /// Similarity above which two tweets count as replicates.
    #[arg(long, value_name = "X")]
    duplicate_threshold: Option<f64>,
    /// Predictions CSV (`account_id,class,score`).
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

pub(crate) fn load_model(flag: &Option<PathBuf>, config: &PipelineConfig) -> CliResult<TrainedModel> {
    Ok(TrainedModel::load(&required_path(flag, &config.paths.model, "model")?)?)
}

pub fn classify(args: &ClassifyArgs, config: &PipelineConfig) -> CliResult {
    let model = load_model(&args.model, config)?;
    let vectors: Vec<FeatureVector> = match (&args.features, &args.snapshots) {
        (Some(p), _) => read_feature_file(p)?,
        (None, Some(s)) => {
            let dict = SpamDictionary::load(&required_path(&args.dict, &config.paths.dictionary, "dictionary")?)?;
            extract_all(&read_snapshot_store(s)?, &dict, &extractor_config(args.duplicate_threshold, config)?)?
        }
        (None, None) => return Err(CliError::Usage("pass --features, or --snapshots with --dict".into())),
    };
    use rayon::prelude::*;
    let rows: Vec<(AccountClass, f64)> = vectors
        .par_iter()
        .map(|v| predict(&model, v))
        .collect::<trendspam_core::Result<_>>()?;
    write_with(&args.out, |w| {
        let mut csv = csv::Writer::from_writer(w);
        let err = |e: csv::Error| trendspam_core::Error::Input(format!("writing predictions: {e}"));
        csv.write_record(["account_id", "class", "score"]).map_err(err)?;
        for (v, (class, score)) in vectors.iter().zip(&rows) {
            csv.write_record([v.account_id.as_str(), class.as_str(), &score.to_string()])
                .map_err(err)?;
        }
        csv.flush().map_err(|e| trendspam_core::Error::Input(format!("writing predictions: {e}")))
    })?;
    let spammers = rows.iter().filter(|(c, _)| c.is_spammer()).count();
    info!("classified {} accounts, {spammers} as spammer", rows.len());
    Ok(())
}
