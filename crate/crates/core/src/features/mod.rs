//! Per-account feature extraction over the recent-tweet window.
//!
//! Every ratio with a zero denominator evaluates to 0, so vectors are always
//! finite. Key order is fixed by [`FEATURE_CATALOG`].

mod content;
mod dictionary;
mod entities;
pub mod levenshtein;
mod profile;
mod replication;
mod reputation;
pub mod stats;

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::domain::AccountSnapshot;
use crate::error::{Error, Result};

pub use content::content_rates;
pub use dictionary::{dictionary_feature, SpamDictionary};
pub(crate) use dictionary::phrase_hit;
pub use entities::{diversity_index, entity_features, EntityKind};
pub use profile::profile_features;
pub use replication::{count_replicates, replication_features, ReplicationStats};
pub use reputation::reputation_features;

/// Bumped whenever [`FEATURE_CATALOG`] changes.
pub const CATALOG_VERSION: u32 = 1;

/// Canonical feature names in output order.
pub const FEATURE_CATALOG: &[&str] = &[
    "followers",
    "friends",
    "ratio_fpf",
    "ratio_alt",
    "reputation",
    "followers_per_day",
    "friends_per_day",
    "statuses_count",
    "listed_count",
    "favourites_count",
    "age_days",
    "tweeting_freq_global",
    "tweeting_freq_recent",
    "rate_retweet",
    "rate_reply",
    "rate_original",
    "words_min",
    "words_max",
    "words_median",
    "words_avg",
    "frac_tweets_with_url",
    "nb_url",
    "nb_unique_url",
    "avg_uses_url",
    "diversity_url",
    "adjusted_uses_url",
    "per_day_url",
    "url_per_tweet_min",
    "url_per_tweet_max",
    "url_per_tweet_median",
    "url_per_tweet_avg",
    "url_per_word_min",
    "url_per_word_max",
    "url_per_word_median",
    "url_per_word_avg",
    "frac_tweets_with_hashtag",
    "nb_hashtag",
    "nb_unique_hashtag",
    "avg_uses_hashtag",
    "diversity_hashtag",
    "adjusted_uses_hashtag",
    "per_day_hashtag",
    "hashtag_per_tweet_min",
    "hashtag_per_tweet_max",
    "hashtag_per_tweet_median",
    "hashtag_per_tweet_avg",
    "hashtag_per_word_min",
    "hashtag_per_word_max",
    "hashtag_per_word_median",
    "hashtag_per_word_avg",
    "frac_tweets_with_mention",
    "nb_mention",
    "nb_unique_mention",
    "avg_uses_mention",
    "diversity_mention",
    "adjusted_uses_mention",
    "per_day_mention",
    "mention_per_tweet_min",
    "mention_per_tweet_max",
    "mention_per_tweet_median",
    "mention_per_tweet_avg",
    "mention_per_word_min",
    "mention_per_word_max",
    "mention_per_word_median",
    "mention_per_word_avg",
    "avg_similarity",
    "nb_replicates",
    "retweets_min",
    "retweets_max",
    "retweets_median",
    "retweets_avg",
    "favorites_min",
    "favorites_max",
    "favorites_median",
    "favorites_avg",
    "frac_tweets_spamterm",
];

/// Default "higher than 90%" similarity bar for replicates.
pub const DUPLICATE_THRESHOLD: f64 = 0.90;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractorConfig {
    /// Two tweets are replicates when their similarity is strictly above this.
    pub duplicate_threshold: f64,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        ExtractorConfig {
            duplicate_threshold: DUPLICATE_THRESHOLD,
        }
    }
}

/// A subset of named features, in catalog order.
pub type Partial = Vec<(&'static str, f64)>;

/// Named feature values for one account.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub account_id: String,
    pub features: IndexMap<String, f64>,
}

impl FeatureVector {
    pub fn new(account_id: impl Into<String>) -> Self {
        FeatureVector {
            account_id: account_id.into(),
            features: IndexMap::new(),
        }
    }

    pub fn from_pairs<S: Into<String>>(
        account_id: impl Into<String>,
        pairs: impl IntoIterator<Item = (S, f64)>,
    ) -> Self {
        FeatureVector {
            account_id: account_id.into(),
            features: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.features.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Values for `names`, in that order.
    pub fn project(&self, names: &[String]) -> Result<Vec<f64>> {
        names
            .iter()
            .map(|n| {
                self.get(n).ok_or_else(|| {
                    Error::input(format!("account {}: missing feature `{n}`", self.account_id))
                })
            })
            .collect()
    }
}

/// Compute the full catalog for one account.
pub fn extract(
    acc: &AccountSnapshot,
    dict: &SpamDictionary,
    config: &ExtractorConfig,
) -> Result<FeatureVector> {
    let parts = [
        profile_features(acc)?,
        content_rates(acc)?,
        entity_features(acc)?,
        replication_features(acc, config.duplicate_threshold)?,
        reputation_features(acc)?,
        dictionary_feature(acc, dict)?,
    ];
    let mut features = IndexMap::with_capacity(FEATURE_CATALOG.len());
    for (name, value) in parts.into_iter().flatten() {
        debug_assert!(value.is_finite(), "{name} = {value}");
        // Counters near u64::MAX are the only route to a non-finite value.
        let value = if value.is_finite() { value } else { 0.0 };
        features.insert(name.to_owned(), value);
    }
    debug_assert!(features.keys().map(String::as_str).eq(FEATURE_CATALOG.iter().copied()));
    Ok(FeatureVector {
        account_id: acc.account_id.clone(),
        features,
    })
}

/// Extract every snapshot in parallel; output order matches input order.
pub fn extract_all(
    snapshots: &[AccountSnapshot],
    dict: &SpamDictionary,
    config: &ExtractorConfig,
) -> Result<Vec<FeatureVector>> {
    use rayon::prelude::*;
    snapshots
        .par_iter()
        .map(|s| extract(s, dict, config))
        .collect()
}

/// Versioned catalog manifest: a header line, then one feature name per line.
pub fn catalog_manifest() -> String {
    let mut out = format!("# trendspam feature catalog v{CATALOG_VERSION}\n");
    for name in FEATURE_CATALOG {
        out.push_str(name);
        out.push('\n');
    }
    out
}

/// Parse a manifest (or any name-per-line list); `#` lines are comments.
pub fn parse_feature_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

/// Feature file: one JSON [`FeatureVector`] per line.
pub fn write_feature_file<W: Write>(mut out: W, vectors: &[FeatureVector]) -> Result<()> {
    for v in vectors {
        serde_json::to_writer(&mut out, v)?;
        out.write_all(b"\n").map_err(|e| Error::io("<features>", e))?;
    }
    Ok(())
}

pub fn read_feature_file(path: &Path) -> Result<Vec<FeatureVector>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let v: FeatureVector = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        if let Some((name, value)) = v.features.iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: idx + 1,
                message: format!("non-finite value {value} for `{name}`"),
            });
        }
        out.push(v);
    }
    Ok(out)
}
