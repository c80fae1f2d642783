//! Shared fixtures for the criterion benchmarks.

use trendspam_core::evaluate::{gen_synthetic_corpus, SyntheticCorpus};
use trendspam_core::features::{extract_all, ExtractorConfig};
use trendspam_core::learn::feature_set_preset;
use trendspam_core::Dataset;

pub fn corpus(spammers: usize, legit: usize) -> SyntheticCorpus {
    gen_synthetic_corpus(spammers, legit, 0, 7).expect("synthetic corpus")
}

/// Paper-selected features joined with the corpus labels.
pub fn dataset(c: &SyntheticCorpus) -> Dataset {
    let vectors = extract_all(&c.snapshots, &c.dictionary, &ExtractorConfig::default()).expect("extract");
    let names = feature_set_preset("paper-selected").expect("preset");
    Dataset::join(&vectors, &c.labels, &names).expect("join").0
}

/// Normalized texts of one account's window, oldest first.
pub fn window_texts(c: &SyntheticCorpus, account: usize) -> Vec<Vec<char>> {
    c.snapshots[account]
        .recent_tweets
        .iter()
        .rev()
        .map(|t| t.text.chars().collect())
        .collect()
}
