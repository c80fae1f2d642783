use crate::domain::AccountSnapshot;
use crate::error::Result;

use super::content::require_window;
use super::stats::Summary;
use super::Partial;

/// Retweet and favourite count statistics over the window.
pub fn reputation_features(acc: &AccountSnapshot) -> Result<Partial> {
    require_window(acc)?;
    let rts: Vec<f64> = acc.recent_tweets.iter().map(|t| t.retweet_count as f64).collect();
    let favs: Vec<f64> = acc.recent_tweets.iter().map(|t| t.favorite_count as f64).collect();
    let (r, f) = (Summary::of(&rts), Summary::of(&favs));
    Ok(vec![
        ("retweets_min", r.min),
        ("retweets_max", r.max),
        ("retweets_median", r.median),
        ("retweets_avg", r.mean),
        ("favorites_min", f.min),
        ("favorites_max", f.max),
        ("favorites_median", f.median),
        ("favorites_avg", f.mean),
    ])
}
