use crate::domain::AccountSnapshot;
use crate::error::{Error, Result};
use crate::text::word_count;

use super::stats::Summary;
use super::Partial;

pub(crate) fn require_window(acc: &AccountSnapshot) -> Result<()> {
    if acc.recent_tweets.is_empty() {
        return Err(Error::input(format!(
            "account {}: no recent tweets",
            acc.account_id
        )));
    }
    Ok(())
}

/// Retweet / reply / original shares plus words-per-tweet statistics.
///
/// A retweet that also opens with a mention counts as a retweet.
pub fn content_rates(acc: &AccountSnapshot) -> Result<Partial> {
    require_window(acc)?;
    let n = acc.recent_tweets.len();
    let (mut retweets, mut replies) = (0usize, 0usize);
    for t in &acc.recent_tweets {
        if t.is_retweet {
            retweets += 1;
        } else if t.is_reply() {
            replies += 1;
        }
    }
    let originals = n - retweets - replies;
    let words: Vec<f64> = acc
        .recent_tweets
        .iter()
        .map(|t| word_count(&t.text) as f64)
        .collect();
    let w = Summary::of(&words);
    Ok(vec![
        ("rate_retweet", retweets as f64 / n as f64),
        ("rate_reply", replies as f64 / n as f64),
        ("rate_original", originals as f64 / n as f64),
        ("words_min", w.min),
        ("words_max", w.max),
        ("words_median", w.median),
        ("words_avg", w.mean),
    ])
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    fn get(p: &Partial, k: &str) -> f64 {
        p.iter().find(|(n, _)| *n == k).unwrap().1
    }

    #[test]
    fn rates_split_the_window() {
        let mut ts = Vec::new();
        for i in 0..10 {
            let mut t = tweet(i, if (4..7).contains(&i) { "@bob hi" } else { "plain" });
            if i < 4 {
                t.is_retweet = true;
                t.retweeted_author_id = Some("orig".into());
                t.text = "@orig retweeted".into();
            }
            ts.push(t);
        }
        let p = content_rates(&account(ts)).unwrap();
        assert_eq!(get(&p, "rate_retweet"), 0.4);
        assert_eq!(get(&p, "rate_reply"), 0.3);
        assert_eq!(get(&p, "rate_original"), 0.3);
    }

    #[test]
    fn all_original() {
        let p = content_rates(&account(vec![tweet(0, "a"), tweet(1, "b")])).unwrap();
        assert_eq!(
            (get(&p, "rate_retweet"), get(&p, "rate_reply"), get(&p, "rate_original")),
            (0.0, 0.0, 1.0)
        );
    }

    #[test]
    fn word_statistics() {
        let texts = ["a b", "a b c d", "a b c d", "1 2 3 4 5 6 7 8 9 10"];
        let ts = texts.iter().enumerate().map(|(i, s)| tweet(i, s)).collect();
        let p = content_rates(&account(ts)).unwrap();
        assert_eq!(get(&p, "words_min"), 2.0);
        assert_eq!(get(&p, "words_max"), 10.0);
        assert_eq!(get(&p, "words_median"), 4.0);
        assert_eq!(get(&p, "words_avg"), 5.0);
    }

    #[test]
    fn empty_window_errors() {
        assert!(content_rates(&account(vec![])).is_err());
    }
}
