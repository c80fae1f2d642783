//! CART classification tree with Gini splits.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Node {
    /// Go left when `x[feature] <= threshold`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    /// Weighted class mass `[non_spammer, spammer]` reaching this leaf.
    Leaf { distribution: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features examined per split; `None` examines all.
    pub max_features: Option<usize>,
}

impl Tree {
    /// Spammer fraction at the leaf reached by `x`.
    pub fn score(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
                Node::Leaf { distribution: [n, s] } => {
                    let total = n + s;
                    return if total > 0.0 { s / total } else { 0.5 };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
                Node::Leaf { .. } => 0,
            }
        }
        go(&self.nodes, 0)
    }
}

struct Best {
    feature: usize,
    threshold: f64,
    gain: f64,
}

fn gini(n: f64, s: f64) -> f64 {
    let t = n + s;
    if t <= 0.0 {
        0.0
    } else {
        let (pn, ps) = (n / t, s / t);
        1.0 - pn * pn - ps * ps
    }
}

/// Midpoint lying in `[a, b)` for `a < b`.
fn midpoint(a: f64, b: f64) -> f64 {
    let m = a + (b - a) / 2.0;
    if m < b {
        m
    } else {
        a
    }
}

/// Grow a tree on `samples` (indices into `rows`, repeats allowed).
pub(crate) fn grow<R: Rng>(
    rows: &[Vec<f64>],
    targets: &[bool],
    weights: &[f64],
    samples: Vec<usize>,
    params: TreeParams,
    rng: &mut R,
) -> Tree {
    let d = rows.first().map_or(0, Vec::len);
    let mut nodes = Vec::new();
    // (node slot, samples, depth)
    let mut stack = vec![(0usize, samples, 0usize)];
    nodes.push(Node::Leaf { distribution: [0.0; 2] });
    let mut feats: Vec<usize> = (0..d).collect();
    while let Some((slot, idx, depth)) = stack.pop() {
        let mut dist = [0.0; 2];
        for &i in &idx {
            dist[targets[i] as usize] += weights[i];
        }
        let stop = dist[0] == 0.0
            || dist[1] == 0.0
            || params.max_depth.is_some_and(|m| depth >= m)
            || idx.len() < 2 * params.min_leaf.max(1);
        let best = if stop {
            None
        } else {
            let candidates: &[usize] = match params.max_features {
                Some(k) if k < d => {
                    let mut picked = rand::seq::index::sample(rng, d, k).into_vec();
                    picked.sort_unstable();
                    feats.clear();
                    feats.extend(picked);
                    &feats
                }
                _ => {
                    if feats.len() != d {
                        feats = (0..d).collect();
                    }
                    &feats
                }
            };
            best_split(rows, targets, weights, &idx, candidates, dist, params.min_leaf.max(1))
        };
        match best {
            None => nodes[slot] = Node::Leaf { distribution: dist },
            Some(b) => {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    idx.iter().partition(|&&i| rows[i][b.feature] <= b.threshold);
                let left = nodes.len();
                nodes.push(Node::Leaf { distribution: [0.0; 2] });
                let right = nodes.len();
                nodes.push(Node::Leaf { distribution: [0.0; 2] });
                nodes[slot] = Node::Split {
                    feature: b.feature,
                    threshold: b.threshold,
                    left,
                    right,
                };
                // Right pushed first so the left subtree is grown first.
                stack.push((right, r, depth + 1));
                stack.push((left, l, depth + 1));
            }
        }
    }
    Tree { nodes }
}

fn best_split(
    rows: &[Vec<f64>],
    targets: &[bool],
    weights: &[f64],
    idx: &[usize],
    features: &[usize],
    total: [f64; 2],
    min_leaf: usize,
) -> Option<Best> {
    let w_total = total[0] + total[1];
    let parent = gini(total[0], total[1]) * w_total;
    let mut best: Option<Best> = None;
    let mut order: Vec<usize> = idx.to_vec();
    for &f in features {
        order.sort_by(|&a, &b| rows[a][f].total_cmp(&rows[b][f]));
        let mut left = [0.0; 2];
        for k in 0..order.len() - 1 {
            let i = order[k];
            left[targets[i] as usize] += weights[i];
            let (v, next) = (rows[i][f], rows[order[k + 1]][f]);
            if v == next || k + 1 < min_leaf || order.len() - (k + 1) < min_leaf {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let child = gini(left[0], left[1]) * (left[0] + left[1])
                + gini(right[0], right[1]) * (right[0] + right[1]);
            let gain = parent - child;
            if gain > 1e-12 && best.as_ref().is_none_or(|b| gain > b.gain + 1e-12) {
                best = Some(Best {
                    feature: f,
                    threshold: midpoint(v, next),
                    gain,
                });
            }
        }
    }
    best
}
