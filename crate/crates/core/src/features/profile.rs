use crate::domain::AccountSnapshot;
use crate::error::{Error, Result};

use super::stats::ratio;
use super::Partial;

/// Social-graph counters, their ratios, per-day rates and tweeting frequencies.
pub fn profile_features(acc: &AccountSnapshot) -> Result<Partial> {
    let age = acc.age_days();
    if age <= 0.0 {
        return Err(Error::input(format!(
            "account {}: age must be positive (created_at {}, snapshot_at {})",
            acc.account_id, acc.created_at, acc.snapshot_at
        )));
    }
    let followers = acc.followers_count as f64;
    let friends = acc.friends_count as f64;
    let statuses = acc.statuses_count as f64;
    Ok(vec![
        ("followers", followers),
        ("friends", friends),
        ("ratio_fpf", ratio(followers, friends)),
        ("ratio_alt", ratio(friends, followers * followers)),
        ("reputation", ratio(followers, friends + followers)),
        ("followers_per_day", followers / age),
        ("friends_per_day", friends / age),
        ("statuses_count", statuses),
        ("listed_count", acc.listed_count as f64),
        ("favourites_count", acc.favourites_count as f64),
        ("age_days", age),
        ("tweeting_freq_global", statuses / age),
        (
            "tweeting_freq_recent",
            acc.recent_tweets.len() as f64 / acc.window_days(),
        ),
    ])
}
