//! Ground-truth labeling: spam-tweet rules, the automation index and the
//! account classification workflow, with answers from a human or a script.

mod oracle;
mod rules;
mod workflow;

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::AccountSnapshot;
use crate::error::{Error, Result};
use crate::features::SpamDictionary;
use crate::ingestion::SourceCatalog;
use crate::text::{folded_tokens, normalize_text};

pub use oracle::{
    ask, FnOracle, HumanVerdictProvider, InteractiveOracle, Query, Question, ScriptedAnswer,
    ScriptedOracle,
};
pub use rules::{spam_fraction, spam_tweet_rule, Clause, SpamRules, TweetLabel, Verdict, SEED_SELLING_TERMS};
pub use workflow::{
    automation_index, automation_index_with, classify_account, is_valid_trace, trace_verdict,
    LabeledAccount, WorkflowStep,
};

/// Candidate terms from spam texts, reviewed in descending frequency order.
///
/// Frequencies count every occurrence of a case-folded token in the
/// normalized texts; ties are presented alphabetically.
pub fn build_spam_dictionary<S: AsRef<str>>(
    spam_texts: &[S],
    min_freq: usize,
    review: &dyn HumanVerdictProvider,
) -> Result<SpamDictionary> {
    if spam_texts.is_empty() {
        return Err(Error::input("no spam texts to build a dictionary from"));
    }
    if min_freq == 0 {
        return Err(Error::input("min_freq must be positive"));
    }
    let mut freq: HashMap<String, usize> = HashMap::new();
    for text in spam_texts {
        for tok in folded_tokens(&normalize_text(text.as_ref())) {
            *freq.entry(tok).or_default() += 1;
        }
    }
    let mut candidates: Vec<(String, usize)> =
        freq.into_iter().filter(|(_, n)| *n >= min_freq).collect();
    candidates.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let mut accepted = Vec::new();
    for (term, _) in &candidates {
        if ask(review, &Query::about_term(term))? == "accept" {
            accepted.push(term.as_str());
        }
    }
    if accepted.is_empty() {
        return Err(Error::input(format!(
            "all {} candidate terms were rejected",
            candidates.len()
        )));
    }
    SpamDictionary::new(accepted)
}

/// One account's evidence tweet.  Without a `label` the spam-tweet rule is
/// evaluated on the tweet as found in the account's window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub account_id: String,
    pub tweet_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rationale: Vec<Clause>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_hashtag: Option<String>,
}

impl EvidenceRecord {
    fn resolve(
        &self,
        acc: &AccountSnapshot,
        rules: &SpamRules,
        oracle: &dyn HumanVerdictProvider,
    ) -> Result<TweetLabel> {
        if let Some(label) = self.label {
            let l = TweetLabel {
                tweet_id: self.tweet_id.clone(),
                label,
                rationale: self.rationale.clone(),
            };
            if !l.is_consistent() {
                return Err(Error::input(format!(
                    "evidence for {}: spam labels need a rationale, legitimate ones none",
                    self.account_id
                )));
            }
            return Ok(l);
        }
        let tweet = acc
            .recent_tweets
            .iter()
            .find(|t| t.tweet_id == self.tweet_id)
            .ok_or_else(|| {
                Error::input(format!(
                    "evidence tweet {} not in the window of {}",
                    self.tweet_id, self.account_id
                ))
            })?;
        rules.label(tweet, self.context_hashtag.as_deref(), oracle)
    }
}

/// Outcome of a labeling batch.
#[derive(Debug, Clone, Default)]
pub struct LabelRun {
    pub labels: Vec<LabeledAccount>,
    pub evidence: Vec<TweetLabel>,
    /// Accounts present in the store but missing from the evidence file.
    pub without_evidence: Vec<String>,
}

impl LabelRun {
    pub fn spam_fraction(&self) -> f64 {
        spam_fraction(&self.evidence)
    }
}

/// Label every account that has evidence, in snapshot order.
pub fn label_accounts(
    snapshots: &[AccountSnapshot],
    evidence: &[EvidenceRecord],
    catalog: &SourceCatalog,
    automation_threshold: f64,
    rules: &SpamRules,
    oracle: &dyn HumanVerdictProvider,
) -> Result<LabelRun> {
    let known: HashSet<&str> = snapshots.iter().map(|s| s.account_id.as_str()).collect();
    let mut by_account: HashMap<&str, &EvidenceRecord> = HashMap::new();
    for e in evidence {
        if !known.contains(e.account_id.as_str()) {
            return Err(Error::input(format!("evidence names unknown account {}", e.account_id)));
        }
        if by_account.insert(&e.account_id, e).is_some() {
            return Err(Error::input(format!("duplicate evidence for account {}", e.account_id)));
        }
    }
    let todo: Vec<(&AccountSnapshot, &EvidenceRecord)> = snapshots
        .iter()
        .filter_map(|s| by_account.get(s.account_id.as_str()).map(|e| (s, *e)))
        .collect();
    let one = |(acc, ev): &(&AccountSnapshot, &EvidenceRecord)| -> Result<(TweetLabel, LabeledAccount)> {
        let label = ev.resolve(acc, rules, oracle)?;
        let auto = automation_index_with(acc, catalog, automation_threshold)?;
        let account = classify_account(acc, &label, &auto, oracle)?;
        Ok((label, account))
    };
    let done: Vec<(TweetLabel, LabeledAccount)> = if oracle.concurrent() {
        todo.par_iter().map(one).collect::<Result<_>>()?
    } else {
        todo.iter().map(one).collect::<Result<_>>()?
    };
    let (evidence, labels) = done.into_iter().unzip();
    Ok(LabelRun {
        labels,
        evidence,
        without_evidence: snapshots
            .iter()
            .filter(|s| !by_account.contains_key(s.account_id.as_str()))
            .map(|s| s.account_id.clone())
            .collect(),
    })
}

fn read_jsonl<T: serde::de::DeserializeOwned>(reader: impl BufRead, origin: &Path) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: origin.to_owned(),
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

fn write_jsonl<T: Serialize>(mut writer: impl Write, items: &[T]) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut writer, item)?;
        writer.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
    }
    writer.flush().map_err(|e| Error::io("<output>", e))
}

fn open(path: &Path) -> Result<std::io::BufReader<std::fs::File>> {
    std::fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn read_evidence(path: &Path) -> Result<Vec<EvidenceRecord>> {
    read_jsonl(open(path)?, path)
}

pub fn write_evidence(writer: impl Write, records: &[EvidenceRecord]) -> Result<()> {
    write_jsonl(writer, records)
}

/// Read a labels file, rejecting traces that do not follow the workflow graph
/// or disagree with the recorded class.
pub fn read_labels(path: &Path) -> Result<Vec<LabeledAccount>> {
    let labels: Vec<LabeledAccount> = read_jsonl(open(path)?, path)?;
    for l in &labels {
        if trace_verdict(&l.verdict_trace) != Some(l.class) {
            return Err(Error::input(format!(
                "{}: label for {} has trace {:?} inconsistent with class {}",
                path.display(),
                l.account_id,
                l.verdict_trace.iter().map(|s| s.id()).collect::<Vec<_>>(),
                l.class.as_str()
            )));
        }
    }
    Ok(labels)
}

pub fn write_labels(writer: impl Write, labels: &[LabeledAccount]) -> Result<()> {
    write_jsonl(writer, labels)
}
