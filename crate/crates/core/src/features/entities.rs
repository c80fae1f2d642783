use std::collections::HashMap;

use crate::domain::{AccountSnapshot, TweetRecord};
use crate::error::Result;
use crate::text::word_count;

use super::content::require_window;
use super::stats::{ratio, Summary};
use super::Partial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    Url,
    Hashtag,
    Mention,
}

impl EntityKind {
    pub const ALL: [EntityKind; 3] = [EntityKind::Url, EntityKind::Hashtag, EntityKind::Mention];

    /// Entity values of this kind in one tweet. Hashtags and mentions are
    /// case-folded; URLs are compared as stored (their expanded form).
    fn values(self, t: &TweetRecord) -> Vec<String> {
        match self {
            EntityKind::Url => t.urls.clone(),
            EntityKind::Hashtag => t.hashtags.iter().map(|h| h.to_lowercase()).collect(),
            EntityKind::Mention => t.mentions.iter().map(|m| m.to_lowercase()).collect(),
        }
    }

    fn names(self) -> &'static [&'static str; 15] {
        match self {
            EntityKind::Url => &[
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
            ],
            EntityKind::Hashtag => &[
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
            ],
            EntityKind::Mention => &[
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
            ],
        }
    }
}

/// True diversity `1 / Σ p_i²` of a usage-count distribution; 0 when nothing was used.
pub fn diversity_index<I: IntoIterator<Item = u64>>(use_counts: I) -> f64 {
    // T² / Σc² in integers, so the result does not depend on iteration order.
    let (mut total, mut squares) = (0u128, 0u128);
    for c in use_counts {
        let c = u128::from(c);
        total += c;
        squares += c * c;
    }
    if total == 0 {
        return 0.0;
    }
    (total as f64 * total as f64) / squares as f64
}

/// Usage, reuse and diversity features for URLs, hashtags and mentions.
pub fn entity_features(acc: &AccountSnapshot) -> Result<Partial> {
    require_window(acc)?;
    let window_days = acc.window_days();
    let n_tweets = acc.recent_tweets.len() as f64;
    let mut out = Vec::with_capacity(45);

    for kind in EntityKind::ALL {
        let mut uses: HashMap<String, u64> = HashMap::new();
        let mut per_tweet = Vec::with_capacity(acc.recent_tweets.len());
        let mut per_word = Vec::with_capacity(acc.recent_tweets.len());
        let mut with_entity = 0usize;
        for t in &acc.recent_tweets {
            let values = kind.values(t);
            let k = values.len() as f64;
            if !values.is_empty() {
                with_entity += 1;
            }
            per_tweet.push(k);
            per_word.push(k / word_count(&t.text).max(1) as f64);
            for v in values {
                *uses.entry(v).or_default() += 1;
            }
        }
        let total: u64 = uses.values().sum();
        let total = total as f64;
        let unique = uses.len() as f64;
        let diversity = diversity_index(uses.values().copied());
        let pt = Summary::of(&per_tweet);
        let pw = Summary::of(&per_word);
        let values = [
            with_entity as f64 / n_tweets,
            total,
            unique,
            ratio(total, unique),
            diversity,
            ratio(total, diversity),
            total / window_days,
            pt.min,
            pt.max,
            pt.median,
            pt.mean,
            pw.min,
            pw.max,
            pw.median,
            pw.mean,
        ];
        out.extend(kind.names().iter().copied().zip(values));
    }
    Ok(out)
}
