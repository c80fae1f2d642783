use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use crate::domain::{AccountSnapshot, TweetRecord};
use crate::error::{Error, Result};

/// Social neighborhood of an account.
pub trait SocialEdgeProvider: Sync {
    fn followers_of(&self, account_id: &str) -> Result<Vec<String>>;
    fn retweeters_of(&self, account_id: &str, recent_tweets: &[TweetRecord]) -> Result<Vec<String>>;
}

/// Followers from an edge list, retweeters from retweet records in the
/// corpus.  Lists are returned sorted.
#[derive(Debug, Clone, Default)]
pub struct CorpusEdges {
    followers: BTreeMap<String, BTreeSet<String>>,
    retweeters: BTreeMap<String, BTreeSet<String>>,
}

impl CorpusEdges {
    pub fn new(snapshots: &[AccountSnapshot], edges: &[(String, String)]) -> Self {
        let mut followers: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (follower, followee) in edges {
            if follower != followee {
                followers.entry(followee.clone()).or_default().insert(follower.clone());
            }
        }
        let mut retweeters: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for s in snapshots {
            for t in &s.recent_tweets {
                if let Some(orig) = &t.retweeted_author_id {
                    if *orig != s.account_id {
                        retweeters.entry(orig.clone()).or_default().insert(s.account_id.clone());
                    }
                }
            }
        }
        CorpusEdges {
            followers,
            retweeters,
        }
    }
}

impl SocialEdgeProvider for CorpusEdges {
    fn followers_of(&self, account_id: &str) -> Result<Vec<String>> {
        Ok(self
            .followers
            .get(account_id)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default())
    }

    fn retweeters_of(&self, account_id: &str, _recent: &[TweetRecord]) -> Result<Vec<String>> {
        Ok(self
            .retweeters
            .get(account_id)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default())
    }
}

/// Table-driven provider; lists are returned in insertion order.
#[derive(Debug, Clone, Default)]
pub struct MockEdges {
    followers: BTreeMap<String, Vec<String>>,
    retweeters: BTreeMap<String, Vec<String>>,
    failing: HashSet<String>,
}

impl MockEdges {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_followers<I, S>(mut self, account: &str, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.followers
            .entry(account.to_owned())
            .or_default()
            .extend(ids.into_iter().map(Into::into));
        self
    }

    pub fn with_retweeters<I, S>(mut self, account: &str, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.retweeters
            .entry(account.to_owned())
            .or_default()
            .extend(ids.into_iter().map(Into::into));
        self
    }

    /// Queries about `account` fail.
    pub fn failing_for(mut self, account: &str) -> Self {
        self.failing.insert(account.to_owned());
        self
    }

    fn check(&self, account: &str) -> Result<()> {
        if self.failing.contains(account) {
            Err(Error::input(format!("edge lookup refused for {account}")))
        } else {
            Ok(())
        }
    }
}

impl SocialEdgeProvider for MockEdges {
    fn followers_of(&self, account_id: &str) -> Result<Vec<String>> {
        self.check(account_id)?;
        Ok(self.followers.get(account_id).cloned().unwrap_or_default())
    }

    fn retweeters_of(&self, account_id: &str, _recent: &[TweetRecord]) -> Result<Vec<String>> {
        self.check(account_id)?;
        Ok(self.retweeters.get(account_id).cloned().unwrap_or_default())
    }
}

/// CSV `follower_id,followee_id` with a header row.
pub fn read_edges<R: Read>(reader: R, origin: &Path) -> Result<Vec<(String, String)>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = r
        .headers()
        .map_err(|e| Error::Parse {
            path: origin.to_owned(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["follower_id", "followee_id"] {
        return Err(Error::Parse {
            path: origin.to_owned(),
            line: 1,
            message: "expected header `follower_id,followee_id`".into(),
        });
    }
    let mut out = Vec::new();
    for (idx, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            path: origin.to_owned(),
            line: idx + 2,
            message: e.to_string(),
        })?;
        match (rec.get(0), rec.get(1)) {
            (Some(a), Some(b)) if !a.is_empty() && !b.is_empty() => out.push((a.to_owned(), b.to_owned())),
            _ => {
                return Err(Error::Parse {
                    path: origin.to_owned(),
                    line: idx + 2,
                    message: "edge needs two non-empty ids".into(),
                })
            }
        }
    }
    Ok(out)
}

pub fn write_edges<W: Write>(writer: W, edges: &[(String, String)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::input(format!("writing edges: {e}"));
    w.write_record(["follower_id", "followee_id"]).map_err(csv_err)?;
    for (a, b) in edges {
        w.write_record([a, b]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("<edges>", e))
}
