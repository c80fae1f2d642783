//! Cross-validation, spammer-class metrics and the synthetic corpus.

mod synth;

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::AccountClass;
use crate::error::{Error, Result};
use crate::learn::{train, Algorithm, Dataset, TrainConfig};

pub use synth::{gen_synthetic_corpus, SyntheticCorpus, PLANTED_FEATURES, SPAM_TEMPLATES};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub index: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified folds: each class is shuffled and dealt round-robin, the deal
/// continuing where the previous class stopped.  Warnings name classes too
/// small to appear in every fold.
pub fn kfold_split(ds: &Dataset, k: usize, seed: u64) -> Result<(Vec<Fold>, Vec<String>)> {
    if k < 2 {
        return Err(Error::input("k must be at least 2"));
    }
    if ds.len() < k {
        return Err(Error::input(format!("{} examples cannot fill {k} folds", ds.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut warnings = Vec::new();
    let mut next = 0;
    for class in [false, true] {
        let mut members: Vec<usize> = (0..ds.len()).filter(|&i| ds.targets[i] == class).collect();
        if !members.is_empty() && members.len() < k {
            warnings.push(format!(
                "only {} {} examples for {k} folds; some folds lack the class",
                members.len(),
                AccountClass::from_spammer(class).as_str()
            ));
        }
        members.shuffle(&mut rng);
        for i in members {
            buckets[next].push(i);
            next = (next + 1) % k;
        }
    }
    let folds = (0..k)
        .map(|f| {
            let mut test = buckets[f].clone();
            test.sort_unstable();
            let mut train: Vec<usize> = buckets
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, b)| b.iter().copied())
                .collect();
            train.sort_unstable();
            Fold { index: f, train, test }
        })
        .collect();
    Ok((folds, warnings))
}

/// Spammer is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, fp, tn, fn_ }
    }

    pub fn record(&mut self, actual_spammer: bool, predicted_spammer: bool) {
        match (actual_spammer, predicted_spammer) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn add(&mut self, other: &ConfusionCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.tn += other.tn;
        self.fn_ += other.fn_;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub fp_rate: f64,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn metrics(c: &ConfusionCounts) -> Metrics {
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let recall = ratio(tp, tp + fn_);
    let precision = ratio(tp, tp + fp);
    Metrics {
        fp_rate: ratio(fp, fp + tn),
        recall,
        precision,
        f1: ratio(2.0 * precision * recall, precision + recall),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub counts: ConfusionCounts,
    /// Training error message when the fold could not be evaluated.
    pub error: Option<String>,
}

/// One test-set prediction, kept for error analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub account_id: String,
    pub fold: usize,
    pub class: AccountClass,
    pub predicted: AccountClass,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub algorithm: Algorithm,
    pub feature_set: String,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    /// Summed over successful folds.
    pub aggregate: ConfusionCounts,
    pub metrics: Metrics,
    pub predictions: Vec<Prediction>,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn is_partial(&self) -> bool {
        self.folds.iter().any(|f| f.error.is_some())
    }

    /// Compromised accounts the model flagged as spammers.
    pub fn compromised_flagged(&self) -> usize {
        self.predictions
            .iter()
            .filter(|p| p.class == AccountClass::Compromised && p.predicted == AccountClass::Spammer)
            .count()
    }
}

/// Train on k-1 folds and test on the held-out one, for every fold.
/// Model seeds are `seed + fold`.
pub fn cross_validate(
    ds: &Dataset,
    algorithm: Algorithm,
    feature_set_name: &str,
    feature_set: &[String],
    k: usize,
    seed: u64,
    config: &TrainConfig,
) -> Result<EvalReport> {
    let ds = ds.project(feature_set)?;
    let (folds, warnings) = kfold_split(&ds, k, seed)?;
    let results: Vec<(FoldResult, Vec<Prediction>)> = folds
        .par_iter()
        .map(|fold| {
            let train_set = ds.subset(&fold.train);
            let mut counts = ConfusionCounts::default();
            match train(&train_set, algorithm, config, seed.wrapping_add(fold.index as u64)) {
                Ok(model) => {
                    let preds = fold
                        .test
                        .iter()
                        .map(|&i| {
                            let score = model.score_row(&ds.rows[i]);
                            let predicted = AccountClass::from_spammer(score > 0.5);
                            counts.record(ds.targets[i], predicted.is_spammer());
                            Prediction {
                                account_id: ds.account_ids[i].clone(),
                                fold: fold.index,
                                class: ds.classes[i],
                                predicted,
                                score,
                            }
                        })
                        .collect();
                    (
                        FoldResult {
                            fold: fold.index,
                            counts,
                            error: None,
                        },
                        preds,
                    )
                }
                Err(e) => (
                    FoldResult {
                        fold: fold.index,
                        counts,
                        error: Some(e.to_string()),
                    },
                    Vec::new(),
                ),
            }
        })
        .collect();
    let mut aggregate = ConfusionCounts::default();
    let mut fold_results = Vec::with_capacity(results.len());
    let mut predictions = Vec::new();
    for (r, p) in results {
        aggregate.add(&r.counts);
        fold_results.push(r);
        predictions.extend(p);
    }
    Ok(EvalReport {
        algorithm,
        feature_set: feature_set_name.to_owned(),
        seed,
        metrics: metrics(&aggregate),
        folds: fold_results,
        aggregate,
        predictions,
        warnings,
    })
}

#[derive(Serialize)]
struct ReportRow<'a> {
    algo: &'a str,
    feature_set: &'a str,
    fold: String,
    tp: u64,
    fp: u64,
    tn: u64,
    #[serde(rename = "fn")]
    fn_: u64,
    fp_rate: f64,
    recall: f64,
    precision: f64,
    f1: f64,
    status: &'a str,
}

/// Per-fold rows followed by an `all` row of micro-aggregated counts for
/// each report.
pub fn write_report_csv<W: Write>(writer: W, reports: &[EvalReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::input(format!("writing report: {e}"));
    for r in reports {
        let algo = r.algorithm.as_str();
        for f in &r.folds {
            let m = metrics(&f.counts);
            w.serialize(ReportRow {
                algo,
                feature_set: &r.feature_set,
                fold: f.fold.to_string(),
                tp: f.counts.tp,
                fp: f.counts.fp,
                tn: f.counts.tn,
                fn_: f.counts.fn_,
                fp_rate: m.fp_rate,
                recall: m.recall,
                precision: m.precision,
                f1: m.f1,
                status: if f.error.is_some() { "failed" } else { "ok" },
            })
            .map_err(csv_err)?;
        }
        w.serialize(ReportRow {
            algo,
            feature_set: &r.feature_set,
            fold: "all".into(),
            tp: r.aggregate.tp,
            fp: r.aggregate.fp,
            tn: r.aggregate.tn,
            fn_: r.aggregate.fn_,
            fp_rate: r.metrics.fp_rate,
            recall: r.metrics.recall,
            precision: r.metrics.precision,
            f1: r.metrics.f1,
            status: if r.is_partial() { "partial" } else { "ok" },
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))
}

/// Test-set predictions as CSV, for error analysis.
pub fn write_predictions_csv<W: Write>(writer: W, reports: &[EvalReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::input(format!("writing predictions: {e}"));
    w.write_record(["algo", "feature_set", "fold", "account_id", "class", "predicted", "score"])
        .map_err(csv_err)?;
    for r in reports {
        for p in &r.predictions {
            w.write_record([
                r.algorithm.as_str(),
                &r.feature_set,
                &p.fold.to_string(),
                &p.account_id,
                p.class.as_str(),
                p.predicted.as_str(),
                &p.score.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Error::io("<predictions>", e))
}
