//! Account classification workflow and the automation index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{AccountClass, AccountSnapshot, AutomationStatus, SourceCategory, AUTOMATION_THRESHOLD};
use crate::error::{Error, Result};
use crate::ingestion::{classify_source, SourceCatalog};

use super::oracle::{ask, HumanVerdictProvider, Query, Question};
use super::rules::TweetLabel;

/// Share of window tweets posted from Automated or Unknown sources.
pub fn automation_index(acc: &AccountSnapshot, catalog: &SourceCatalog) -> Result<AutomationStatus> {
    automation_index_with(acc, catalog, AUTOMATION_THRESHOLD)
}

pub fn automation_index_with(
    acc: &AccountSnapshot,
    catalog: &SourceCatalog,
    threshold: f64,
) -> Result<AutomationStatus> {
    if acc.recent_tweets.is_empty() {
        return Err(Error::input(format!(
            "account {} has no recent tweets",
            acc.account_id
        )));
    }
    let automated = acc
        .recent_tweets
        .iter()
        .filter(|t| {
            matches!(
                classify_source(catalog, &t.source_name),
                SourceCategory::Automated | SourceCategory::Unknown
            )
        })
        .count();
    let idx = automated as f64 / acc.recent_tweets.len() as f64;
    Ok(AutomationStatus::from_index(idx, threshold))
}

/// Node of the classification diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WorkflowStep {
    /// Automated with spam evidence.
    A,
    /// Automated with legitimate evidence; recent tweets inspected.
    B,
    BYes,
    BNo,
    /// Human-operated with legitimate evidence.
    C,
    /// Human-operated with spam evidence; behavior inspected.
    D,
    DConstant,
    DSubscribedApp,
    DOneOff,
}

impl WorkflowStep {
    pub const ALL: [WorkflowStep; 9] = [
        WorkflowStep::A,
        WorkflowStep::B,
        WorkflowStep::BYes,
        WorkflowStep::BNo,
        WorkflowStep::C,
        WorkflowStep::D,
        WorkflowStep::DConstant,
        WorkflowStep::DSubscribedApp,
        WorkflowStep::DOneOff,
    ];

    pub fn id(self) -> &'static str {
        match self {
            WorkflowStep::A => "a",
            WorkflowStep::B => "b",
            WorkflowStep::BYes => "b.yes",
            WorkflowStep::BNo => "b.no",
            WorkflowStep::C => "c",
            WorkflowStep::D => "d",
            WorkflowStep::DConstant => "d.constant",
            WorkflowStep::DSubscribedApp => "d.subscribed-app",
            WorkflowStep::DOneOff => "d.one-off",
        }
    }

    /// Steps reachable in one edge; `None` is the entry point.
    pub fn successors(from: Option<WorkflowStep>) -> &'static [WorkflowStep] {
        use WorkflowStep::*;
        match from {
            None => &[A, B, C, D],
            Some(B) => &[BYes, BNo],
            Some(D) => &[DConstant, DSubscribedApp, DOneOff],
            Some(_) => &[],
        }
    }

    /// Class decided at a terminal step.
    pub fn verdict(self) -> Option<AccountClass> {
        use WorkflowStep::*;
        match self {
            A | BYes | DConstant => Some(AccountClass::Spammer),
            BNo | C | DOneOff => Some(AccountClass::NonSpammer),
            DSubscribedApp => Some(AccountClass::Compromised),
            B | D => None,
        }
    }
}

impl fmt::Display for WorkflowStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for WorkflowStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WorkflowStep::ALL
            .into_iter()
            .find(|w| w.id() == s)
            .ok_or_else(|| Error::Lookup {
                kind: "workflow step",
                name: s.to_owned(),
            })
    }
}

impl Serialize for WorkflowStep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for WorkflowStep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True when `trace` walks edges from the entry to a terminal step.
pub fn is_valid_trace(trace: &[WorkflowStep]) -> bool {
    let mut prev = None;
    for &step in trace {
        if !WorkflowStep::successors(prev).contains(&step) {
            return false;
        }
        prev = Some(step);
    }
    prev.is_some_and(|p| WorkflowStep::successors(Some(p)).is_empty())
}

/// Class reached by a valid trace.
pub fn trace_verdict(trace: &[WorkflowStep]) -> Option<AccountClass> {
    if is_valid_trace(trace) {
        trace.last().and_then(|s| s.verdict())
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledAccount {
    pub account_id: String,
    pub class: AccountClass,
    pub automation: AutomationStatus,
    pub evidence_tweet_id: String,
    pub verdict_trace: Vec<WorkflowStep>,
    pub labeler: String,
}

pub fn classify_account(
    acc: &AccountSnapshot,
    evidence: &TweetLabel,
    automation: &AutomationStatus,
    oracle: &dyn HumanVerdictProvider,
) -> Result<LabeledAccount> {
    use WorkflowStep::*;
    let trace = match (automation.is_automated(), evidence.is_spam()) {
        (true, true) => vec![A],
        (true, false) => {
            let ans = ask(oracle, &Query::about_account(Question::RecentSpam, acc))?;
            vec![B, if ans == "yes" { BYes } else { BNo }]
        }
        (false, false) => vec![C],
        (false, true) => {
            let ans = ask(oracle, &Query::about_account(Question::SpammingBehavior, acc))?;
            let leaf = match ans {
                "constant" => DConstant,
                "subscribed-app" => DSubscribedApp,
                _ => DOneOff,
            };
            vec![D, leaf]
        }
    };
    let class = trace_verdict(&trace).expect("workflow emits terminal traces");
    Ok(LabeledAccount {
        account_id: acc.account_id.clone(),
        class,
        automation: *automation,
        evidence_tweet_id: evidence.tweet_id.clone(),
        verdict_trace: trace,
        labeler: oracle.labeler().to_owned(),
    })
}
