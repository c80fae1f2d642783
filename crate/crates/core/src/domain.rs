//! Domain types shared by every stage of the pipeline.
//!
//! Timestamps are UTC epoch seconds. Everything here is a plain value type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seconds in one day; all per-day rates use this constant.
pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Size of the recent-activity window kept per account.
pub const MAX_RECENT_TWEETS: usize = 200;

/// UTC epoch seconds.
pub type Timestamp = i64;

/// One tweet as it appears in a corpus dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub author_id: String,
    pub text: String,
    pub created_at: Timestamp,
    pub source_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_url: Option<String>,
    #[serde(default)]
    pub is_retweet: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retweeted_author_id: Option<String>,
    #[serde(default)]
    pub retweet_count: u64,
    #[serde(default)]
    pub favorite_count: u64,
    #[serde(default)]
    pub hashtags: Vec<String>,
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default)]
    pub urls: Vec<String>,
    #[serde(default)]
    pub image_count: u32,
}

impl TweetRecord {
    pub fn validate(&self) -> Result<()> {
        if self.tweet_id.is_empty() {
            return Err(Error::input("tweet_id must be non-empty"));
        }
        if self.is_retweet != self.retweeted_author_id.is_some() {
            return Err(Error::input(format!(
                "tweet {}: is_retweet must be set exactly when retweeted_author_id is present",
                self.tweet_id
            )));
        }
        Ok(())
    }

    /// True when the tweet carries a hashtag, mention, URL or image.
    pub fn has_entity(&self) -> bool {
        !self.hashtags.is_empty()
            || !self.mentions.is_empty()
            || !self.urls.is_empty()
            || self.image_count > 0
    }

    /// A reply is a tweet whose raw text opens with a mention token.
    pub fn is_reply(&self) -> bool {
        self.text
            .split_whitespace()
            .next()
            .is_some_and(|tok| tok.starts_with('@') && tok.len() > 1)
    }
}

/// Profile counters plus the most recent tweets of one account.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountSnapshot {
    pub account_id: String,
    pub screen_name: String,
    pub created_at: Timestamp,
    pub followers_count: u64,
    pub friends_count: u64,
    pub statuses_count: u64,
    pub listed_count: u64,
    pub favourites_count: u64,
    /// Newest first, at most [`MAX_RECENT_TWEETS`].
    #[serde(default)]
    pub recent_tweets: Vec<TweetRecord>,
    pub snapshot_at: Timestamp,
}

impl AccountSnapshot {
    pub fn validate(&self) -> Result<()> {
        if self.recent_tweets.len() > MAX_RECENT_TWEETS {
            return Err(Error::input(format!(
                "account {}: {} recent tweets exceeds the {MAX_RECENT_TWEETS}-tweet window",
                self.account_id,
                self.recent_tweets.len()
            )));
        }
        if self.snapshot_at < self.created_at {
            return Err(Error::input(format!(
                "account {}: snapshot_at precedes created_at",
                self.account_id
            )));
        }
        for t in &self.recent_tweets {
            t.validate()?;
            if t.author_id != self.account_id && !t.is_retweet {
                return Err(Error::input(format!(
                    "account {}: tweet {} has foreign author {}",
                    self.account_id, t.tweet_id, t.author_id
                )));
            }
        }
        Ok(())
    }

    /// Account age in fractional days.
    pub fn age_days(&self) -> f64 {
        (self.snapshot_at - self.created_at) as f64 / SECONDS_PER_DAY
    }

    /// Sort tweets newest-first (ties: descending tweet_id) and truncate to the window.
    pub fn normalize_window(&mut self) {
        sort_newest_first(&mut self.recent_tweets);
        self.recent_tweets.truncate(MAX_RECENT_TWEETS);
    }

    /// Span in days between the oldest and newest tweet of the window,
    /// floored at one second.
    pub fn window_days(&self) -> f64 {
        const FLOOR_DAYS: f64 = 1.0 / SECONDS_PER_DAY;
        let (min, max) = self
            .recent_tweets
            .iter()
            .fold((i64::MAX, i64::MIN), |(lo, hi), t| {
                (lo.min(t.created_at), hi.max(t.created_at))
            });
        if self.recent_tweets.is_empty() {
            return FLOOR_DAYS;
        }
        ((max - min) as f64 / SECONDS_PER_DAY).max(FLOOR_DAYS)
    }
}

/// Newest-first ordering with a descending-id tie-break.
pub fn sort_newest_first(tweets: &mut [TweetRecord]) {
    tweets.sort_by(|a, b| {
        b.created_at
            .cmp(&a.created_at)
            .then_with(|| b.tweet_id.cmp(&a.tweet_id))
    });
}

/// Category of the client application that posted a tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceCategory {
    Official,
    Trusted,
    Automated,
    Unknown,
}

impl SourceCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceCategory::Official => "official",
            SourceCategory::Trusted => "trusted",
            SourceCategory::Automated => "automated",
            SourceCategory::Unknown => "unknown",
        }
    }
}

impl fmt::Display for SourceCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "official" => Ok(SourceCategory::Official),
            "trusted" => Ok(SourceCategory::Trusted),
            "automated" => Ok(SourceCategory::Automated),
            "unknown" => Ok(SourceCategory::Unknown),
            other => Err(Error::Lookup {
                kind: "source category",
                name: other.to_owned(),
            }),
        }
    }
}

/// Ground-truth account class.
///
/// `Compromised` only exists in ground truth; learners see it as `NonSpammer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccountClass {
    Spammer,
    NonSpammer,
    Compromised,
}

impl AccountClass {
    /// Binary training target: true for spammers.
    pub fn is_spammer(self) -> bool {
        matches!(self, AccountClass::Spammer)
    }

    /// Collapse to the binary classifier's label space.
    pub fn binary(self) -> AccountClass {
        match self {
            AccountClass::Spammer => AccountClass::Spammer,
            AccountClass::NonSpammer | AccountClass::Compromised => AccountClass::NonSpammer,
        }
    }

    pub fn from_spammer(is_spammer: bool) -> AccountClass {
        if is_spammer {
            AccountClass::Spammer
        } else {
            AccountClass::NonSpammer
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AccountClass::Spammer => "spammer",
            AccountClass::NonSpammer => "non-spammer",
            AccountClass::Compromised => "compromised",
        }
    }
}

impl fmt::Display for AccountClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Automation threshold: an account is automated when strictly more than
/// this share of its window comes from automated or unknown sources.
pub const AUTOMATION_THRESHOLD: f64 = 0.80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Automated,
    HumanOperated,
}

/// Automation verdict together with the index it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutomationStatus {
    pub status: Operation,
    pub automation_index: f64,
}

impl AutomationStatus {
    pub fn from_index(automation_index: f64, threshold: f64) -> Self {
        let status = if automation_index > threshold {
            Operation::Automated
        } else {
            Operation::HumanOperated
        };
        AutomationStatus {
            status,
            automation_index,
        }
    }

    pub fn is_automated(&self) -> bool {
        self.status == Operation::Automated
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tweet(id: &str, at: Timestamp) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            author_id: "u".into(),
            text: String::new(),
            created_at: at,
            source_name: "web".into(),
            source_url: None,
            is_retweet: false,
            retweeted_author_id: None,
            retweet_count: 0,
            favorite_count: 0,
            hashtags: vec![],
            mentions: vec![],
            urls: vec![],
            image_count: 0,
        }
    }

    #[test]
    fn newest_first_with_id_tiebreak() {
        let mut ts = vec![tweet("a", 5), tweet("c", 9), tweet("b", 9), tweet("d", 1)];
        sort_newest_first(&mut ts);
        let ids: Vec<_> = ts.iter().map(|t| t.tweet_id.as_str()).collect();
        assert_eq!(ids, ["c", "b", "a", "d"]);
    }

    #[test]
    fn retweet_flag_must_match_original_author() {
        let mut t = tweet("x", 0);
        t.is_retweet = true;
        assert!(t.validate().is_err());
        t.retweeted_author_id = Some("o".into());
        assert!(t.validate().is_ok());
    }

    #[test]
    fn reply_needs_leading_mention() {
        let mut t = tweet("x", 0);
        t.text = "@bob hi".into();
        assert!(t.is_reply());
        t.text = "hi @bob".into();
        assert!(!t.is_reply());
        t.text = "@ alone".into();
        assert!(!t.is_reply());
    }

    #[test]
    fn automation_is_strictly_above_threshold() {
        assert!(!AutomationStatus::from_index(0.80, AUTOMATION_THRESHOLD).is_automated());
        assert!(AutomationStatus::from_index(0.8000001, AUTOMATION_THRESHOLD).is_automated());
    }

    #[test]
    fn compromised_trains_as_non_spammer() {
        assert_eq!(AccountClass::Compromised.binary(), AccountClass::NonSpammer);
        assert!(!AccountClass::Compromised.is_spammer());
    }
}
