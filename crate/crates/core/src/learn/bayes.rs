//! Gaussian Naive Bayes.

use serde::{Deserialize, Serialize};

pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Per-class priors and per-feature mean / variance; index 0 is
/// non-spammer, 1 spammer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    pub priors: [f64; 2],
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
}

impl GaussianNb {
    pub(crate) fn fit(rows: &[Vec<f64>], targets: &[bool]) -> Self {
        let d = rows[0].len();
        let mut counts = [0usize; 2];
        let mut means = [vec![0.0; d], vec![0.0; d]];
        for (r, &y) in rows.iter().zip(targets) {
            let c = y as usize;
            counts[c] += 1;
            for (m, x) in means[c].iter_mut().zip(r) {
                *m += x;
            }
        }
        for c in 0..2 {
            means[c].iter_mut().for_each(|m| *m /= counts[c] as f64);
        }
        let mut variances = [vec![0.0; d], vec![0.0; d]];
        for (r, &y) in rows.iter().zip(targets) {
            let c = y as usize;
            for ((v, x), m) in variances[c].iter_mut().zip(r).zip(&means[c]) {
                *v += (x - m) * (x - m);
            }
        }
        for c in 0..2 {
            variances[c]
                .iter_mut()
                .for_each(|v| *v = (*v / counts[c] as f64).max(VARIANCE_FLOOR));
        }
        let n = rows.len() as f64;
        GaussianNb {
            priors: [counts[0] as f64 / n, counts[1] as f64 / n],
            means,
            variances,
        }
    }

    /// Log joint density `ln P(c) + Σ ln N(x | μ, σ²)` for each class.
    pub fn log_joint(&self, x: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            *o = self.priors[c].ln()
                + x.iter()
                    .zip(&self.means[c])
                    .zip(&self.variances[c])
                    .map(|((x, m), v)| {
                        -0.5 * (2.0 * std::f64::consts::PI * v).ln() - (x - m) * (x - m) / (2.0 * v)
                    })
                    .sum::<f64>();
        }
        out
    }

    /// Posterior `[P(non-spammer | x), P(spammer | x)]`.
    pub fn posterior(&self, x: &[f64]) -> [f64; 2] {
        let [ln, ls] = self.log_joint(x);
        let ps = 1.0 / (1.0 + (ln - ls).exp());
        [1.0 - ps, ps]
    }
}
