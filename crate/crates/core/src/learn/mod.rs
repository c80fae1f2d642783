//! Supervised learners over feature vectors and feature ranking.

mod boost;
mod bayes;
mod forest;
mod ranking;
mod tree;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::AccountClass;
use crate::error::{Error, Result};
use crate::features::{FeatureVector, FEATURE_CATALOG};
use crate::labeling::LabeledAccount;

pub use bayes::{GaussianNb, VARIANCE_FLOOR};
pub use boost::{AdaBoost, Stump, PERFECT_STUMP_EPSILON};
pub use forest::RandomForest;
pub use ranking::{
    chi_squared, equal_frequency_bins, info_gain, pearson, prune_ranked, rank_features, select_features,
    FeatureRanking, RankMethod,
};
pub use tree::{Node, Tree};

use tree::TreeParams;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Feature set chosen by ranking in the reference study.
pub const PAPER_SELECTED: [&str; 14] = [
    "tweeting_freq_global",
    "rate_reply",
    "nb_replicates",
    "frac_tweets_with_mention",
    "adjusted_uses_url",
    "per_day_hashtag",
    "adjusted_uses_hashtag",
    "nb_mention",
    "per_day_mention",
    "adjusted_uses_mention",
    "words_min",
    "mention_per_tweet_max",
    "mention_per_word_avg",
    "retweets_avg",
];

pub const PRESETS: [&str; 2] = ["paper-selected", "full"];

pub fn feature_set_preset(name: &str) -> Result<Vec<String>> {
    let names: &[&str] = match name {
        "paper-selected" => &PAPER_SELECTED,
        "full" => FEATURE_CATALOG,
        _ => {
            return Err(Error::Lookup {
                kind: "feature preset",
                name: name.to_owned(),
            })
        }
    };
    Ok(names.iter().map(|s| (*s).to_owned()).collect())
}

/// Labeled examples in a fixed feature order.  `targets[i]` is true for
/// spammers; `classes` keeps the original three-way label.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub account_ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<bool>,
    pub classes: Vec<AccountClass>,
}

/// Mismatches found while joining features with labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JoinReport {
    pub labels_without_features: Vec<String>,
    pub features_without_labels: usize,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, rows: Vec<Vec<f64>>, classes: Vec<AccountClass>) -> Result<Self> {
        let ids = (0..rows.len()).map(|i| format!("row{i}")).collect();
        Self::with_ids(feature_names, ids, rows, classes)
    }

    pub fn with_ids(
        feature_names: Vec<String>,
        account_ids: Vec<String>,
        rows: Vec<Vec<f64>>,
        classes: Vec<AccountClass>,
    ) -> Result<Self> {
        if rows.len() != classes.len() || rows.len() != account_ids.len() {
            return Err(Error::input("rows, ids and classes differ in length"));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != feature_names.len()) {
            return Err(Error::input(format!(
                "row {r} has {} values for {} features",
                rows[r].len(),
                feature_names.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = feature_names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::input(format!("feature `{dup}` listed twice")));
        }
        let targets = classes.iter().map(|c| c.is_spammer()).collect();
        Ok(Dataset {
            feature_names,
            account_ids,
            rows,
            targets,
            classes,
        })
    }

    /// Inner join on account id, in feature-file order.
    pub fn join(
        vectors: &[FeatureVector],
        labels: &[LabeledAccount],
        feature_names: &[String],
    ) -> Result<(Self, JoinReport)> {
        let by_id: HashMap<&str, AccountClass> =
            labels.iter().map(|l| (l.account_id.as_str(), l.class)).collect();
        let mut report = JoinReport::default();
        let (mut ids, mut rows, mut classes) = (Vec::new(), Vec::new(), Vec::new());
        let mut matched = HashSet::new();
        for v in vectors {
            match by_id.get(v.account_id.as_str()) {
                Some(&c) => {
                    rows.push(v.project(feature_names)?);
                    ids.push(v.account_id.clone());
                    classes.push(c);
                    matched.insert(v.account_id.as_str());
                }
                None => report.features_without_labels += 1,
            }
        }
        report.labels_without_features = labels
            .iter()
            .filter(|l| !matched.contains(l.account_id.as_str()))
            .map(|l| l.account_id.clone())
            .collect();
        let ds = Self::with_ids(feature_names.to_vec(), ids, rows, classes)?;
        Ok((ds, report))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, f: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[f]).collect()
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            account_ids: idx.iter().map(|&i| self.account_ids[i].clone()).collect(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            targets: idx.iter().map(|&i| self.targets[i]).collect(),
            classes: idx.iter().map(|&i| self.classes[i]).collect(),
        }
    }

    /// Keep only `names`, in that order.
    pub fn project(&self, names: &[String]) -> Result<Dataset> {
        let cols: Vec<usize> = names
            .iter()
            .map(|n| {
                self.feature_names
                    .iter()
                    .position(|f| f == n)
                    .ok_or_else(|| Error::input(format!("dataset lacks feature `{n}`")))
            })
            .collect::<Result<_>>()?;
        Ok(Dataset {
            feature_names: names.to_vec(),
            account_ids: self.account_ids.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect(),
            targets: self.targets.clone(),
            classes: self.classes.clone(),
        })
    }

    /// Class counts `[non_spammer, spammer]` after binary mapping.
    pub fn class_counts(&self) -> [usize; 2] {
        let s = self.targets.iter().filter(|t| **t).count();
        [self.len() - s, s]
    }

    fn check_trainable(&self) -> Result<()> {
        let [n, s] = self.class_counts();
        if n == 0 || s == 0 {
            return Err(Error::Training(format!(
                "need both classes, got {s} spammers and {n} non-spammers"
            )));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(f) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::input(format!(
                    "non-finite `{}` for {}",
                    self.feature_names[f], self.account_ids[r]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    NaiveBayes,
    DecisionTree,
    RandomForest,
    AdaBoost,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::NaiveBayes,
        Algorithm::DecisionTree,
        Algorithm::RandomForest,
        Algorithm::AdaBoost,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "naive-bayes",
            Algorithm::DecisionTree => "decision-tree",
            Algorithm::RandomForest => "random-forest",
            Algorithm::AdaBoost => "ada-boost",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive-bayes" | "nb" => Ok(Algorithm::NaiveBayes),
            "decision-tree" | "tree" => Ok(Algorithm::DecisionTree),
            "random-forest" | "rf" => Ok(Algorithm::RandomForest),
            "ada-boost" | "adaboost" => Ok(Algorithm::AdaBoost),
            _ => Err(Error::Lookup {
                kind: "algorithm",
                name: s.to_owned(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub n_trees: usize,
    /// `None` grows until leaves are pure or hit `min_leaf`.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features tried per forest split; `None` means `round(sqrt(d))`.
    pub max_features: Option<usize>,
    pub boost_rounds: usize,
    pub bins: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n_trees: 100,
            max_depth: None,
            min_leaf: 1,
            max_features: None,
            boost_rounds: 50,
            bins: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Params {
    NaiveBayes(GaussianNb),
    DecisionTree(Tree),
    RandomForest(RandomForest),
    AdaBoost(AdaBoost),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub kind: Algorithm,
    pub seed: u64,
    pub feature_names: Vec<String>,
    pub config: TrainConfig,
    pub params: Params,
}

impl TrainedModel {
    /// Spammer score for a row already in `feature_names` order.
    pub fn score_row(&self, x: &[f64]) -> f64 {
        match &self.params {
            Params::NaiveBayes(m) => m.posterior(x)[1],
            Params::DecisionTree(t) => t.score(x),
            Params::RandomForest(f) => f.score(x),
            Params::AdaBoost(b) => b.score(x),
        }
    }

    /// Spammer probability for each class, `[non_spammer, spammer]`.
    pub fn posterior_row(&self, x: &[f64]) -> [f64; 2] {
        let s = self.score_row(x);
        [1.0 - s, s]
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: TrainedModel = serde_json::from_str(text)?;
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::input(format!(
                "model format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                m.format_version
            )));
        }
        let matches = matches!(
            (&m.params, m.kind),
            (Params::NaiveBayes(_), Algorithm::NaiveBayes)
                | (Params::DecisionTree(_), Algorithm::DecisionTree)
                | (Params::RandomForest(_), Algorithm::RandomForest)
                | (Params::AdaBoost(_), Algorithm::AdaBoost)
        );
        if !matches {
            return Err(Error::input(format!("model kind {} does not match its parameters", m.kind)));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Serde(s) => Error::Parse {
                path: path.to_owned(),
                line: s.line(),
                message: s.to_string(),
            },
            other => other,
        })
    }
}

pub fn train(ds: &Dataset, algorithm: Algorithm, config: &TrainConfig, seed: u64) -> Result<TrainedModel> {
    ds.check_trainable()?;
    let d = ds.feature_names.len();
    let tree_params = TreeParams {
        max_depth: config.max_depth,
        min_leaf: config.min_leaf.max(1),
        max_features: None,
    };
    let params = match algorithm {
        Algorithm::NaiveBayes => Params::NaiveBayes(GaussianNb::fit(&ds.rows, &ds.targets)),
        Algorithm::DecisionTree => {
            let w = vec![1.0; ds.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Params::DecisionTree(tree::grow(
                &ds.rows,
                &ds.targets,
                &w,
                (0..ds.len()).collect(),
                tree_params,
                &mut rng,
            ))
        }
        Algorithm::RandomForest => {
            if config.n_trees == 0 {
                return Err(Error::Training("forest needs at least one tree".into()));
            }
            let k = config
                .max_features
                .unwrap_or_else(|| ((d as f64).sqrt().round() as usize).max(1))
                .clamp(1, d.max(1));
            let params = TreeParams {
                max_features: Some(k),
                ..tree_params
            };
            Params::RandomForest(RandomForest::fit(&ds.rows, &ds.targets, config.n_trees, params, seed))
        }
        Algorithm::AdaBoost => Params::AdaBoost(AdaBoost::fit(&ds.rows, &ds.targets, config.boost_rounds)),
    };
    Ok(TrainedModel {
        format_version: MODEL_FORMAT_VERSION,
        kind: algorithm,
        seed,
        feature_names: ds.feature_names.clone(),
        config: config.clone(),
        params,
    })
}

/// Class and spammer score; spammer iff the score exceeds one half.
pub fn predict(model: &TrainedModel, v: &FeatureVector) -> Result<(AccountClass, f64)> {
    let x = v.project(&model.feature_names)?;
    let score = model.score_row(&x);
    Ok((AccountClass::from_spammer(score > 0.5), score))
}
