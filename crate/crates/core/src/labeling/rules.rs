//! Spam-tweet rule: mechanical clauses evaluated directly, out-of-context
//! judgments delegated to a verdict provider.

use serde::{Deserialize, Serialize};

use crate::domain::TweetRecord;
use crate::error::Result;
use crate::features::phrase_hit;
use crate::ingestion::Blacklist;
use crate::text::folded_tokens;

use super::oracle::{ask, HumanVerdictProvider, Query, Question};

/// Seed phrases advertising paid retweets, favorites or followers.
pub const SEED_SELLING_TERMS: &[&str] = &[
    "buy followers",
    "sell followers",
    "followers for sale",
    "increase your followers",
    "get more followers",
    "paid retweets",
    "auto retweet",
    "automatic retweet",
    "retweet service",
    "ريتويت تلقائي",
    "رتويت تلقائي",
    "زيادة متابعين",
    "زيادة المتابعين",
    "بيع متابعين",
    "شراء متابعين",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Spam,
    Legitimate,
}

/// Clause of the spam-tweet definition that fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    TopicUnrelated,
    UrlPageUnrelated,
    UrlMalicious,
    HijackAdvertising,
    FollowerSelling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetLabel {
    pub tweet_id: String,
    pub label: Verdict,
    #[serde(default)]
    pub rationale: Vec<Clause>,
}

impl TweetLabel {
    pub fn legitimate(tweet_id: impl Into<String>) -> Self {
        TweetLabel {
            tweet_id: tweet_id.into(),
            label: Verdict::Legitimate,
            rationale: Vec::new(),
        }
    }

    pub fn spam(tweet_id: impl Into<String>, clause: Clause) -> Self {
        TweetLabel {
            tweet_id: tweet_id.into(),
            label: Verdict::Spam,
            rationale: vec![clause],
        }
    }

    pub fn is_spam(&self) -> bool {
        self.label == Verdict::Spam
    }

    /// Spam labels must name a clause; legitimate ones must not.
    pub fn is_consistent(&self) -> bool {
        self.is_spam() != self.rationale.is_empty()
    }
}

/// Selling phrases and URL blacklist used by the mechanical clauses.
#[derive(Debug, Clone)]
pub struct SpamRules {
    selling_terms: Vec<String>,
    pub blacklist: Blacklist,
}

impl Default for SpamRules {
    fn default() -> Self {
        SpamRules::new(SEED_SELLING_TERMS.iter().copied(), Blacklist::default())
    }
}

impl SpamRules {
    pub fn new<I, S>(selling_terms: I, blacklist: Blacklist) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut terms: Vec<String> = selling_terms
            .into_iter()
            .map(|t| folded_tokens(t.as_ref()).collect::<Vec<_>>().join(" "))
            .filter(|t| !t.is_empty())
            .collect();
        terms.sort();
        terms.dedup();
        SpamRules {
            selling_terms: terms,
            blacklist,
        }
    }

    pub fn extend_terms<I, S>(&mut self, extra: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let extra: Vec<String> = extra.into_iter().map(|s| s.as_ref().to_owned()).collect();
        let merged = SpamRules::new(
            self.selling_terms.iter().chain(&extra),
            Blacklist::default(),
        );
        self.selling_terms = merged.selling_terms;
    }

    pub fn selling_terms(&self) -> &[String] {
        &self.selling_terms
    }

    pub fn is_selling(&self, text: &str) -> bool {
        let tokens: Vec<String> = folded_tokens(text).collect();
        phrase_hit(&tokens, self.selling_terms.iter().map(String::as_str))
    }

    pub fn label(
        &self,
        t: &TweetRecord,
        context_hashtag: Option<&str>,
        oracle: &dyn HumanVerdictProvider,
    ) -> Result<TweetLabel> {
        if self.is_selling(&t.text) {
            return Ok(TweetLabel::spam(&t.tweet_id, Clause::FollowerSelling));
        }
        if !t.has_entity() {
            return Ok(TweetLabel::legitimate(&t.tweet_id));
        }
        if t.urls.iter().any(|u| self.blacklist.contains_url(u)) {
            return Ok(TweetLabel::spam(&t.tweet_id, Clause::UrlMalicious));
        }
        let trend = !t.hashtags.is_empty() || context_hashtag.is_some();
        if trend {
            let q = Query::about_tweet(Question::TopicRelated, t, context_hashtag);
            if ask(oracle, &q)? == "unrelated" {
                return Ok(TweetLabel::spam(&t.tweet_id, Clause::TopicUnrelated));
            }
        }
        if !t.urls.is_empty() {
            let q = Query::about_tweet(Question::UrlPageRelated, t, context_hashtag);
            if ask(oracle, &q)? == "unrelated" {
                return Ok(TweetLabel::spam(&t.tweet_id, Clause::UrlPageUnrelated));
            }
        }
        if trend || !t.mentions.is_empty() {
            let q = Query::about_tweet(Question::AutomatedAdvertising, t, context_hashtag);
            if ask(oracle, &q)? == "yes" {
                return Ok(TweetLabel::spam(&t.tweet_id, Clause::HijackAdvertising));
            }
        }
        Ok(TweetLabel::legitimate(&t.tweet_id))
    }
}

/// Label one tweet with the built-in selling phrases and no blacklist.
pub fn spam_tweet_rule(
    t: &TweetRecord,
    context_hashtag: Option<&str>,
    oracle: &dyn HumanVerdictProvider,
) -> Result<TweetLabel> {
    SpamRules::default().label(t, context_hashtag, oracle)
}

/// Share of spam labels in a sample; 0 for an empty sample.
pub fn spam_fraction(labels: &[TweetLabel]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    labels.iter().filter(|l| l.is_spam()).count() as f64 / labels.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::labeling::oracle::FnOracle;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn tweet(text: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: "t1".into(),
            author_id: "a1".into(),
            text: text.into(),
            created_at: 0,
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

    struct Refuse;
    impl HumanVerdictProvider for Refuse {
        fn answer(&self, q: &Query<'_>) -> Result<String> {
            Err(Error::Protocol(format!("unexpected question {}", q.question)))
        }
    }

    #[test]
    fn no_entity_is_legitimate_without_oracle() {
        let l = spam_tweet_rule(&tweet("good morning everyone"), None, &Refuse).unwrap();
        assert_eq!(l.label, Verdict::Legitimate);
        assert!(l.is_consistent());
    }

    #[test]
    fn selling_service_over_hijacked_trends() {
        let mut t = tweet("ريتويت تلقائي حسابات خليجية للتواصل 0555 #trend_one #trend_two 4821");
        t.hashtags = vec!["trend_one".into(), "trend_two".into()];
        let l = spam_tweet_rule(&t, Some("trend_one"), &Refuse).unwrap();
        assert_eq!(l.rationale, vec![Clause::FollowerSelling]);
        let no_entity = spam_tweet_rule(&tweet("Buy followers, cheap!"), None, &Refuse).unwrap();
        assert!(no_entity.is_spam());
    }

    #[test]
    fn related_topic_is_legitimate() {
        let mut t = tweet("match tonight #final");
        t.hashtags = vec!["final".into()];
        let o = FnOracle(|q: &Query<'_>| {
            match q.question {
                Question::TopicRelated => "related",
                Question::AutomatedAdvertising => "no",
                _ => "?",
            }
            .to_owned()
        });
        let l = spam_tweet_rule(&t, None, &o).unwrap();
        assert_eq!(l.label, Verdict::Legitimate);
    }

    #[test]
    fn first_affirmed_clause_short_circuits() {
        let calls = AtomicUsize::new(0);
        let mut t = tweet("look #x http://a.example/p");
        t.hashtags = vec!["x".into()];
        t.urls = vec!["http://a.example/p".into()];
        let o = FnOracle(|_: &Query<'_>| {
            calls.fetch_add(1, Ordering::SeqCst);
            "unrelated".to_owned()
        });
        let l = spam_tweet_rule(&t, None, &o).unwrap();
        assert_eq!(l.rationale, vec![Clause::TopicUnrelated]);
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn blacklisted_url_is_mechanical() {
        let rules = SpamRules::new(SEED_SELLING_TERMS, Blacklist::new(["bad.example"]));
        let mut t = tweet("see http://bad.example/x");
        t.urls = vec!["http://bad.example/x".into()];
        let l = rules.label(&t, None, &Refuse).unwrap();
        assert_eq!(l.rationale, vec![Clause::UrlMalicious]);
    }

    #[test]
    fn image_only_asks_nothing_and_stays_legitimate() {
        let mut t = tweet("nice bag");
        t.image_count = 1;
        assert!(!spam_tweet_rule(&t, None, &Refuse).unwrap().is_spam());
    }

    #[test]
    fn mention_only_asks_advertising() {
        let mut t = tweet("@u check my shop");
        t.mentions = vec!["u".into()];
        let o = FnOracle(|q: &Query<'_>| {
            assert_eq!(q.question, Question::AutomatedAdvertising);
            "yes".to_owned()
        });
        let l = spam_tweet_rule(&t, None, &o).unwrap();
        assert_eq!(l.rationale, vec![Clause::HijackAdvertising]);
    }

    #[test]
    fn extended_terms_fire() {
        let mut rules = SpamRules::default();
        assert!(!rules.is_selling("cheap likes here"));
        rules.extend_terms(["Cheap Likes"]);
        assert!(rules.is_selling("CHEAP likes here"));
        assert!(rules.is_selling("buy followers"));
    }

    #[test]
    fn fraction_of_spam() {
        let ls = vec![
            TweetLabel::spam("1", Clause::TopicUnrelated),
            TweetLabel::legitimate("2"),
            TweetLabel::spam("3", Clause::FollowerSelling),
            TweetLabel::spam("4", Clause::FollowerSelling),
        ];
        assert_eq!(spam_fraction(&ls), 0.75);
        assert_eq!(spam_fraction(&[]), 0.0);
    }
}
