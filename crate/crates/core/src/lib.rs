//! Evasion-aware spammer detection for trending-hashtag timelines.
//!
//! The pipeline runs in stages, one module each:
//!
//! * [`ingestion`]: line-delimited corpus dumps into [`AccountSnapshot`]s,
//!   the tweet-source catalog and URL expansion;
//! * [`features`]: the per-account feature catalog, including entity
//!   diversity and near-duplicate text detection;
//! * [`labeling`]: rule-based tweet labels, automation index and the
//!   account classification workflow with pluggable human verdicts;
//! * [`learn`]: Naive Bayes, decision tree, random forest and AdaBoost,
//!   plus information-gain / chi-squared feature ranking;
//! * [`evaluate`]: stratified cross-validation, metrics and a synthetic
//!   corpus generator;
//! * [`hunter`]: breadth-first expansion of detected spammers' networks.

pub mod domain;
pub mod error;
pub mod evaluate;
pub mod features;
pub mod hunter;
pub mod ingestion;
pub mod labeling;
pub mod learn;
pub mod text;

pub use domain::{
    AccountClass, AccountSnapshot, AutomationStatus, Operation, SourceCategory, TweetRecord,
};
pub use error::{Error, Result};
pub use features::{FeatureVector, SpamDictionary};


pub use labeling::LabeledAccount;
pub use learn::{Algorithm, Dataset, TrainedModel};
