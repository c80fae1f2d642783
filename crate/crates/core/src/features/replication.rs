use rayon::prelude::*;

use crate::domain::AccountSnapshot;
use crate::error::Result;
use crate::text::normalize_text;

use super::content::require_window;
use super::levenshtein::{is_near_duplicate, similarity_from_distance, Pattern};
use super::Partial;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationStats {
    /// Mean similarity over all unordered pairs; 0 for a single text.
    pub avg_similarity: f64,
    /// Texts with a strictly-above-threshold match among earlier texts.
    pub nb_replicates: usize,
}

impl ReplicationStats {
    /// `texts` must be in chronological order (oldest first).
    pub fn compute(texts: &[Vec<char>], threshold: f64) -> ReplicationStats {
        let n = texts.len();
        if n < 2 {
            return ReplicationStats {
                avg_similarity: 0.0,
                nb_replicates: 0,
            };
        }
        // Row i: similarities of text i against every later text.
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let pattern = Pattern::new(&texts[i]);
                texts[i + 1..]
                    .iter()
                    .map(|other| {
                        let d = if *other == texts[i] {
                            0
                        } else {
                            pattern.distance(other)
                        };
                        similarity_from_distance(texts[i].len(), other.len(), d)
                    })
                    .collect()
            })
            .collect();

        let mut sum = 0.0;
        let mut replicate = vec![false; n];
        for (i, row) in rows.iter().enumerate() {
            for (off, &s) in row.iter().enumerate() {
                sum += s;
                if s > threshold {
                    replicate[i + 1 + off] = true;
                }
            }
        }
        let pairs = (n * (n - 1) / 2) as f64;
        ReplicationStats {
            avg_similarity: sum / pairs,
            nb_replicates: replicate.iter().filter(|&&r| r).count(),
        }
    }
}

fn chronological_texts(acc: &AccountSnapshot) -> Vec<Vec<char>> {
    acc.recent_tweets
        .iter()
        .rev()
        .map(|t| normalize_text(&t.text).chars().collect())
        .collect()
}

/// Average pairwise similarity and replicate count of the normalized texts.
pub fn replication_features(acc: &AccountSnapshot, threshold: f64) -> Result<Partial> {
    require_window(acc)?;
    let stats = ReplicationStats::compute(&chronological_texts(acc), threshold);
    Ok(vec![
        ("avg_similarity", stats.avg_similarity),
        ("nb_replicates", stats.nb_replicates as f64),
    ])
}

/// Replicate count alone, using the banded early-exit distance.
///
/// `texts` must be chronological. Agrees with
/// [`ReplicationStats::compute`]'s `nb_replicates`.
pub fn count_replicates(texts: &[Vec<char>], threshold: f64) -> usize {
    (1..texts.len())
        .filter(|&k| {
            texts[..k]
                .iter()
                .any(|earlier| is_near_duplicate(earlier, &texts[k], threshold))
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use proptest::prelude::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn identical_pair() {
        let s = ReplicationStats::compute(&[chars("buy now"), chars("buy now")], 0.9);
        assert_eq!(s.avg_similarity, 1.0);
        assert_eq!(s.nb_replicates, 1);
    }

    #[test]
    fn single_text() {
        let s = ReplicationStats::compute(&[chars("x")], 0.9);
        assert_eq!((s.avg_similarity, s.nb_replicates), (0.0, 0));
    }

    #[test]
    fn counts_tweets_not_pairs() {
        let texts = ["same text here", "same text here", "same text here", "other words"]
            .map(chars);
        let s = ReplicationStats::compute(&texts, 0.9);
        assert_eq!(s.nb_replicates, 2);
        assert_eq!(count_replicates(&texts, 0.9), 2);
    }

    #[test]
    fn entities_are_ignored_for_similarity() {
        let acc = account(vec![
            tweet(0, "RT @a: buy gold now 17 #x http://t.co/1"),
            tweet(1, "buy gold now 18 #y @b"),
        ]);
        let p = replication_features(&acc, 0.9).unwrap();
        assert!((p[0].1 - (1.0 - 1.0 / 15.0)).abs() < 1e-12);
        assert_eq!(p[1].1, 1.0);
    }

    #[test]
    fn empty_normalized_texts_match() {
        let acc = account(vec![tweet(0, "#a"), tweet(1, "@b")]);
        let p = replication_features(&acc, 0.9).unwrap();
        assert_eq!(p, vec![("avg_similarity", 1.0), ("nb_replicates", 1.0)]);
    }

    proptest! {
        #[test]
        fn banded_count_matches_matrix(
            texts in proptest::collection::vec("[ab c]{0,24}", 1..14),
            threshold in 0.5f64..0.95,
        ) {
            let texts: Vec<Vec<char>> = texts.iter().map(|t| chars(t)).collect();
            let stats = ReplicationStats::compute(&texts, threshold);
            prop_assert_eq!(count_replicates(&texts, threshold), stats.nb_replicates);
            prop_assert!((0.0..=1.0).contains(&stats.avg_similarity));
        }
    }
}
