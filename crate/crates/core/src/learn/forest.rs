//! Random forest of bootstrap-trained CART trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow, Tree, TreeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub seed: u64,
    pub trees: Vec<Tree>,
}

impl RandomForest {
    /// Fraction of trees voting spammer.
    pub fn score(&self, x: &[f64]) -> f64 {
        if self.trees.is_empty() {
            return 0.5;
        }
        let votes = self.trees.iter().filter(|t| t.score(x) > 0.5).count();
        votes as f64 / self.trees.len() as f64
    }

    pub(crate) fn fit(
        rows: &[Vec<f64>],
        targets: &[bool],
        n_trees: usize,
        params: TreeParams,
        seed: u64,
    ) -> Self {
        let n = rows.len();
        let weights = vec![1.0; n];
        let trees = (0..n_trees)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
                let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                grow(rows, targets, &weights, sample, params, &mut rng)
            })
            .collect();
        RandomForest { seed, trees }
    }
}
