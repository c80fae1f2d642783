use std::collections::HashMap;

use serde::Serialize;

use crate::domain::{AccountSnapshot, SourceCategory};

use super::SourceCatalog;

/// One row of the per-source activity report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceShare {
    pub source_name: String,
    pub category: SourceCategory,
    pub tweet_count: u64,
    pub share: f64,
}

/// Tweet counts per source across all snapshots, largest first (ties by name).
pub fn source_activity_report(
    snapshots: &[AccountSnapshot],
    catalog: &SourceCatalog,
) -> Vec<SourceShare> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in snapshots.iter().flat_map(|s| &s.recent_tweets) {
        *counts.entry(t.source_name.as_str()).or_default() += 1;
    }
    let total: u64 = counts.values().sum();
    let mut rows: Vec<SourceShare> = counts
        .into_iter()
        .map(|(name, n)| SourceShare {
            source_name: name.to_owned(),
            category: catalog.category(name),
            tweet_count: n,
            share: n as f64 / total as f64,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.tweet_count
            .cmp(&a.tweet_count)
            .then_with(|| a.source_name.cmp(&b.source_name))
    });
    rows
}
