//! Breadth-first expansion of detected spammers' followers and retweeters
//! into a classification queue.

mod provider;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::domain::{AccountClass, AccountSnapshot};
use crate::error::{Error, Result};
use crate::features::{extract, ExtractorConfig, SpamDictionary};
use crate::learn::TrainedModel;

pub use provider::{read_edges, write_edges, CorpusEdges, MockEdges, SocialEdgeProvider};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    Seed,
    FollowerOf(String),
    RetweeterOf(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Seed => f.write_str("seed"),
            Provenance::FollowerOf(id) => write!(f, "follower-of:{id}"),
            Provenance::RetweeterOf(id) => write!(f, "retweeter-of:{id}"),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "seed" {
            return Ok(Provenance::Seed);
        }
        match s.split_once(':') {
            Some(("follower-of", id)) if !id.is_empty() => Ok(Provenance::FollowerOf(id.to_owned())),
            Some(("retweeter-of", id)) if !id.is_empty() => Ok(Provenance::RetweeterOf(id.to_owned())),
            _ => Err(Error::Lookup {
                kind: "provenance",
                name: s.to_owned(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueEntry {
    pub account_id: String,
    pub provenance: Provenance,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HuntLimits {
    pub max_depth: usize,
    /// Cap on distinct accounts ever enqueued, seeds included.
    pub max_accounts: usize,
}

impl Default for HuntLimits {
    fn default() -> Self {
        HuntLimits {
            max_depth: 2,
            max_accounts: 1000,
        }
    }
}

/// FIFO of accounts to classify; an id is enqueued at most once.
#[derive(Debug, Clone)]
pub struct HuntQueue {
    queue: VecDeque<QueueEntry>,
    seen: HashSet<String>,
    limits: HuntLimits,
}

impl HuntQueue {
    pub fn new(limits: HuntLimits) -> Self {
        HuntQueue {
            queue: VecDeque::new(),
            seen: HashSet::new(),
            limits,
        }
    }

    pub fn limits(&self) -> HuntLimits {
        self.limits
    }

    /// False when the id was seen before, the depth exceeds the limit, or
    /// the account cap is reached.
    pub fn enqueue(&mut self, entry: QueueEntry) -> bool {
        if entry.depth > self.limits.max_depth
            || self.seen.len() >= self.limits.max_accounts
            || self.seen.contains(&entry.account_id)
        {
            return false;
        }
        self.seen.insert(entry.account_id.clone());
        self.queue.push_back(entry);
        true
    }

    pub fn push_seed(&mut self, account_id: impl Into<String>) -> bool {
        self.enqueue(QueueEntry {
            account_id: account_id.into(),
            provenance: Provenance::Seed,
            depth: 0,
        })
    }

    pub fn pop(&mut self) -> Option<QueueEntry> {
        self.queue.pop_front()
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn is_seen(&self, account_id: &str) -> bool {
        self.seen.contains(account_id)
    }

    pub fn seen_count(&self) -> usize {
        self.seen.len()
    }

    fn drain(&mut self) -> Vec<QueueEntry> {
        self.queue.drain(..).collect()
    }
}

/// Enqueue the followers, then the retweeters, of `detected` at `depth + 1`.
/// On provider failure nothing is enqueued.
pub fn expand(
    q: &mut HuntQueue,
    provider: &dyn SocialEdgeProvider,
    detected: &AccountSnapshot,
    depth: usize,
) -> Result<usize> {
    expand_id(q, provider, &detected.account_id, &detected.recent_tweets, depth)
}

fn expand_id(
    q: &mut HuntQueue,
    provider: &dyn SocialEdgeProvider,
    id: &str,
    recent: &[crate::domain::TweetRecord],
    depth: usize,
) -> Result<usize> {
    if depth >= q.limits.max_depth {
        return Ok(0);
    }
    let followers = provider.followers_of(id)?;
    let retweeters = provider.retweeters_of(id, recent)?;
    let mut added = 0;
    for f in followers {
        added += q.enqueue(QueueEntry {
            account_id: f,
            provenance: Provenance::FollowerOf(id.to_owned()),
            depth: depth + 1,
        }) as usize;
    }
    for r in retweeters {
        added += q.enqueue(QueueEntry {
            account_id: r,
            provenance: Provenance::RetweeterOf(id.to_owned()),
            depth: depth + 1,
        }) as usize;
    }
    Ok(added)
}

/// Snapshot source for dequeued accounts.
pub trait SnapshotLookup: Sync {
    fn lookup(&self, account_id: &str) -> Option<&AccountSnapshot>;
}

impl SnapshotLookup for HashMap<String, AccountSnapshot> {
    fn lookup(&self, account_id: &str) -> Option<&AccountSnapshot> {
        self.get(account_id)
    }
}

impl SnapshotLookup for BTreeMap<String, AccountSnapshot> {
    fn lookup(&self, account_id: &str) -> Option<&AccountSnapshot> {
        self.get(account_id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HuntVerdict {
    Classified { class: AccountClass, score: f64 },
    /// No snapshot, or features could not be extracted.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HuntEntry {
    pub account_id: String,
    pub verdict: HuntVerdict,
    pub provenance: Provenance,
    pub depth: usize,
}

impl HuntEntry {
    pub fn is_spammer(&self) -> bool {
        matches!(self.verdict, HuntVerdict::Classified { class, .. } if class.is_spammer())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct HuntReport {
    /// In dequeue order.
    pub entries: Vec<HuntEntry>,
    /// `(account_id, message)` for expansions the provider could not serve.
    pub expansion_errors: Vec<(String, String)>,
    /// `(account_id, message)` for accounts left unresolved.
    pub unresolved: Vec<(String, String)>,
}

impl HuntReport {
    pub fn detections(&self) -> impl Iterator<Item = &HuntEntry> {
        self.entries.iter().filter(|e| e.is_spammer())
    }
}

/// Everything the hunt needs to classify an account.
pub struct Classifier<'a> {
    pub model: &'a TrainedModel,
    pub dictionary: &'a SpamDictionary,
    pub extractor: ExtractorConfig,
}

impl Classifier<'_> {
    fn classify(&self, acc: &AccountSnapshot) -> Result<(AccountClass, f64)> {
        let v = extract(acc, self.dictionary, &self.extractor)?;
        crate::learn::predict(self.model, &v)
    }
}

/// Classify seeds and, breadth-first, the neighbors of every account
/// classified Spammer.  Each round classifies the whole queue in parallel,
/// then expands sequentially in dequeue order.
pub fn hunt(
    seeds: &[String],
    provider: &dyn SocialEdgeProvider,
    classifier: &Classifier<'_>,
    store: &dyn SnapshotLookup,
    limits: HuntLimits,
) -> Result<HuntReport> {
    if limits.max_accounts == 0 {
        return Err(Error::input("max_accounts must be positive"));
    }
    let mut q = HuntQueue::new(limits);
    for s in seeds {
        q.push_seed(s.clone());
    }
    let mut report = HuntReport::default();
    while !q.is_empty() {
        let batch = q.drain();
        let verdicts: Vec<std::result::Result<(AccountClass, f64), String>> = batch
            .par_iter()
            .map(|e| match store.lookup(&e.account_id) {
                None => Err("no snapshot".to_owned()),
                Some(acc) => classifier.classify(acc).map_err(|err| err.to_string()),
            })
            .collect();
        for (e, v) in batch.into_iter().zip(verdicts) {
            let verdict = match v {
                Ok((class, score)) => HuntVerdict::Classified { class, score },
                Err(msg) => {
                    report.unresolved.push((e.account_id.clone(), msg));
                    HuntVerdict::Unresolved
                }
            };
            let entry = HuntEntry {
                account_id: e.account_id,
                verdict,
                provenance: e.provenance,
                depth: e.depth,
            };
            if entry.is_spammer() && entry.depth < limits.max_depth {
                let recent = store
                    .lookup(&entry.account_id)
                    .map(|a| a.recent_tweets.as_slice())
                    .unwrap_or(&[]);
                if let Err(err) = expand_id(&mut q, provider, &entry.account_id, recent, entry.depth) {
                    report.expansion_errors.push((entry.account_id.clone(), err.to_string()));
                }
            }
            report.entries.push(entry);
        }
    }
    Ok(report)
}

/// `account_id,class,score,provenance,depth`; unresolved rows leave the
/// score empty.
pub fn write_hunt_csv<W: Write>(writer: W, report: &HuntReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::input(format!("writing hunt output: {e}"));
    w.write_record(["account_id", "class", "score", "provenance", "depth"])
        .map_err(csv_err)?;
    for e in &report.entries {
        let (class, score) = match e.verdict {
            HuntVerdict::Classified { class, score } => (class.as_str(), score.to_string()),
            HuntVerdict::Unresolved => ("unresolved", String::new()),
        };
        w.write_record([
            e.account_id.as_str(),
            class,
            &score,
            &e.provenance.to_string(),
            &e.depth.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("<hunt output>", e))
}

#[cfg(test)]
mod tests;
