//! AdaBoost over decision stumps.

use serde::{Deserialize, Serialize};

/// Weighted error used in place of zero when a stump is perfect.
pub const PERFECT_STUMP_EPSILON: f64 = 1e-10;

/// `x[feature] <= threshold` votes `left_spammer`, otherwise the opposite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub left_spammer: bool,
    pub alpha: f64,
}

impl Stump {
    fn vote(&self, x: &[f64]) -> f64 {
        let spam = (x[self.feature] <= self.threshold) == self.left_spammer;
        if spam {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaBoost {
    pub stumps: Vec<Stump>,
}

impl AdaBoost {
    pub fn margin(&self, x: &[f64]) -> f64 {
        self.stumps.iter().map(|s| s.alpha * s.vote(x)).sum()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        1.0 / (1.0 + (-self.margin(x)).exp())
    }

    pub(crate) fn fit(rows: &[Vec<f64>], targets: &[bool], rounds: usize) -> Self {
        let n = rows.len();
        let mut w = vec![1.0 / n as f64; n];
        let mut stumps = Vec::new();
        let d = rows.first().map_or(0, Vec::len);
        let orders: Vec<Vec<usize>> = (0..d)
            .map(|f| {
                let mut o: Vec<usize> = (0..n).collect();
                o.sort_by(|&a, &b| rows[a][f].total_cmp(&rows[b][f]));
                o
            })
            .collect();
        for _ in 0..rounds {
            let Some((mut stump, err)) = best_stump(rows, targets, &w, &orders) else {
                break;
            };
            if err >= 0.5 {
                break;
            }
            let perfect = err <= 0.0;
            let e = err.max(PERFECT_STUMP_EPSILON);
            stump.alpha = 0.5 * ((1.0 - e) / e).ln();
            if perfect {
                stumps.push(stump);
                break;
            }
            let mut z = 0.0;
            for (i, wi) in w.iter_mut().enumerate() {
                let y = if targets[i] { 1.0 } else { -1.0 };
                *wi *= (-stump.alpha * y * stump.vote(&rows[i])).exp();
                z += *wi;
            }
            w.iter_mut().for_each(|wi| *wi /= z);
            stumps.push(stump);
        }
        AdaBoost { stumps }
    }
}

/// Lowest weighted-error stump; ties keep the earliest feature and threshold.
fn best_stump(
    rows: &[Vec<f64>],
    targets: &[bool],
    w: &[f64],
    orders: &[Vec<usize>],
) -> Option<(Stump, f64)> {
    let spam_total: f64 = w.iter().zip(targets).filter(|(_, &t)| t).map(|(w, _)| w).sum();
    let total: f64 = w.iter().sum();
    let mut best: Option<(Stump, f64)> = None;
    for (f, order) in orders.iter().enumerate() {
        let mut left_spam = 0.0;
        let mut left_all = 0.0;
        for k in 0..order.len().saturating_sub(1) {
            let i = order[k];
            left_all += w[i];
            if targets[i] {
                left_spam += w[i];
            }
            let (v, next) = (rows[i][f], rows[order[k + 1]][f]);
            if v == next {
                continue;
            }
            let right_spam = spam_total - left_spam;
            let right_non = (total - left_all) - right_spam;
            let left_non = left_all - left_spam;
            // Error when left votes spammer: left non-spammers + right spammers.
            let err_left_spam = left_non + right_spam;
            let err_left_non = left_spam + right_non;
            let (err, left_spammer) = if err_left_spam <= err_left_non {
                (err_left_spam, true)
            } else {
                (err_left_non, false)
            };
            let err = err.max(0.0) / total;
            if best.as_ref().is_none_or(|(_, e)| err < *e - 1e-15) {
                let mid = v + (next - v) / 2.0;
                best = Some((
                    Stump {
                        feature: f,
                        threshold: if mid < next { mid } else { v },
                        left_spammer,
                        alpha: 0.0,
                    },
                    err,
                ));
            }
        }
    }
    best
}
