//! Feature ranking by information gain or chi-squared over equal-frequency
//! bins, and correlation pruning.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    InfoGain,
    ChiSquared,
}

impl RankMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMethod::InfoGain => "infogain",
            RankMethod::ChiSquared => "chi2",
        }
    }
}

impl fmt::Display for RankMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "infogain" | "info-gain" => Ok(RankMethod::InfoGain),
            "chi2" | "chi-squared" => Ok(RankMethod::ChiSquared),
            _ => Err(Error::Lookup {
                kind: "ranking method",
                name: s.to_owned(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub method: RankMethod,
    /// `(name, score)`, best first; ties keep dataset column order.
    pub scores: Vec<(String, f64)>,
}

impl FeatureRanking {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.scores.iter().map(|(n, _)| n.as_str())
    }
}

/// Equal-frequency bin index per value, assigned by rank.  Values that tie
/// share the bin of their first sorted position.
pub fn equal_frequency_bins(column: &[f64], bins: usize) -> Vec<usize> {
    let n = column.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| column[a].total_cmp(&column[b]));
    let mut out = vec![0; n];
    let mut current = 0;
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 || column[i] != column[order[pos - 1]] {
            current = pos * bins / n;
        }
        out[i] = current;
    }
    out
}

fn entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum()
}

/// `table[bin][class]` contingency counts.
fn contingency(bins_of: &[usize], targets: &[bool], bins: usize) -> Vec<[f64; 2]> {
    let mut table = vec![[0.0; 2]; bins];
    for (&b, &y) in bins_of.iter().zip(targets) {
        table[b][y as usize] += 1.0;
    }
    table
}

/// `H(class) - H(class | bin)` in bits.
pub fn info_gain(table: &[[f64; 2]]) -> f64 {
    let n: f64 = table.iter().map(|r| r[0] + r[1]).sum();
    if n <= 0.0 {
        return 0.0;
    }
    let class = [table.iter().map(|r| r[0]).sum(), table.iter().map(|r| r[1]).sum()];
    let cond: f64 = table
        .iter()
        .map(|r| (r[0] + r[1]) / n * entropy(r))
        .sum();
    (entropy(&class) - cond).max(0.0)
}

/// Pearson chi-squared statistic; cells with zero expected count are skipped.
pub fn chi_squared(table: &[[f64; 2]]) -> f64 {
    let n: f64 = table.iter().map(|r| r[0] + r[1]).sum();
    if n <= 0.0 {
        return 0.0;
    }
    let class = [table.iter().map(|r| r[0]).sum::<f64>(), table.iter().map(|r| r[1]).sum::<f64>()];
    let mut chi = 0.0;
    for r in table {
        let row = r[0] + r[1];
        for c in 0..2 {
            let expected = row * class[c] / n;
            if expected > 0.0 {
                chi += (r[c] - expected) * (r[c] - expected) / expected;
            }
        }
    }
    chi.max(0.0)
}

pub fn rank_features(ds: &Dataset, method: RankMethod, bins: usize) -> Result<FeatureRanking> {
    if bins < 2 {
        return Err(Error::input("ranking needs at least 2 bins"));
    }
    let mut scores: Vec<(usize, f64)> = (0..ds.feature_names.len())
        .map(|f| {
            let col = ds.column(f);
            let table = contingency(&equal_frequency_bins(&col, bins), &ds.targets, bins);
            let s = match method {
                RankMethod::InfoGain => info_gain(&table),
                RankMethod::ChiSquared => chi_squared(&table),
            };
            (f, s)
        })
        .collect();
    scores.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(FeatureRanking {
        method,
        scores: scores
            .into_iter()
            .map(|(f, s)| (ds.feature_names[f].clone(), s))
            .collect(),
    })
}

/// Pearson correlation; 0 when either column is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    if a.is_empty() {
        return 0.0;
    }
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        0.0
    } else {
        (sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0)
    }
}

/// Top `top_k` features by information gain, greedily dropping any whose
/// absolute correlation with an already kept one exceeds `corr_threshold`.
pub fn select_features(ds: &Dataset, top_k: usize, corr_threshold: f64, bins: usize) -> Result<Vec<String>> {
    let ranking = rank_features(ds, RankMethod::InfoGain, bins)?;
    prune_ranked(ds, &ranking, top_k, corr_threshold)
}

/// Walk `ranking` best first over its top `top_k` entries, keeping a feature
/// only if its |Pearson| with every kept feature is at most `corr_threshold`.
pub fn prune_ranked(
    ds: &Dataset,
    ranking: &FeatureRanking,
    top_k: usize,
    corr_threshold: f64,
) -> Result<Vec<String>> {
    let mut kept: Vec<(String, Vec<f64>)> = Vec::new();
    for (name, _) in ranking.scores.iter().take(top_k) {
        let f = ds
            .feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Lookup {
                kind: "feature",
                name: name.clone(),
            })?;
        let col = ds.column(f);
        if kept
            .iter()
            .all(|(_, k)| pearson(&col, k).abs() <= corr_threshold)
        {
            kept.push((name.clone(), col));
        }
    }
    Ok(kept.into_iter().map(|(n, _)| n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::AccountClass;
    use proptest::prelude::*;

    fn brute_entropy(ps: &[f64]) -> f64 {
        ps.iter().filter(|p| **p > 0.0).map(|p| -p * p.ln() / 2f64.ln()).sum()
    }

    fn ds(cols: Vec<Vec<f64>>, y: Vec<bool>) -> Dataset {
        let names = (0..cols.len()).map(|i| format!("f{i}")).collect();
        let rows = (0..y.len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let classes = y.iter().map(|&s| AccountClass::from_spammer(s)).collect();
        Dataset::new(names, rows, classes).unwrap()
    }

    #[test]
    fn perfect_table_gains_one_bit() {
        let t = [[5.0, 0.0], [0.0, 5.0]];
        assert!((info_gain(&t) - 1.0).abs() < 1e-12);
        assert!((info_gain(&t) - (brute_entropy(&[0.5, 0.5]) - 0.0)).abs() < 1e-12);
        assert!((chi_squared(&t) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn uneven_table_matches_oracle() {
        let t = [[3.0, 1.0], [2.0, 6.0]];
        let h = brute_entropy(&[5.0 / 12.0, 7.0 / 12.0]);
        let hc = 4.0 / 12.0 * brute_entropy(&[0.75, 0.25]) + 8.0 / 12.0 * brute_entropy(&[0.25, 0.75]);
        assert!((info_gain(&t) - (h - hc)).abs() < 1e-12);
        let mut chi = 0.0;
        for (r, row) in t.iter().enumerate() {
            for c in 0..2 {
                let rs = t[r][0] + t[r][1];
                let cs = t[0][c] + t[1][c];
                let e = rs * cs / 12.0;
                chi += (row[c] - e).powi(2) / e;
            }
        }
        assert!((chi_squared(&t) - chi).abs() < 1e-12);
    }

    #[test]
    fn bins_are_equal_frequency_and_ties_share() {
        let col: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let b = equal_frequency_bins(&col, 10);
        for k in 0..10 {
            assert_eq!(b.iter().filter(|&&x| x == k).count(), 2);
        }
        let b = equal_frequency_bins(&[1.0, 1.0, 1.0, 2.0], 2);
        assert_eq!(b, vec![0, 0, 0, 1]);
    }

    #[test]
    fn indicator_is_maximal_and_independent_is_zero() {
        let y: Vec<bool> = (0..20).map(|i| i % 4 == 0).collect();
        let ind: Vec<f64> = y.iter().map(|&s| s as u8 as f64).collect();
        let same: Vec<f64> = (0..20).map(|i| (i / 4) as f64).collect();
        let d = ds(vec![ind, same, vec![3.0; 20]], y.clone());
        let r = rank_features(&d, RankMethod::InfoGain, 10).unwrap();
        assert_eq!(r.scores[0].0, "f0");
        let h = brute_entropy(&[0.25, 0.75]);
        assert!((r.scores[0].1 - h).abs() < 1e-12);
        let chi = rank_features(&d, RankMethod::ChiSquared, 10).unwrap();
        let of = |n: &str| chi.scores.iter().find(|s| s.0 == n).unwrap().1;
        // f1 takes values 0..4 in blocks of 4, with exactly one spammer per block.
        assert!(of("f1").abs() < 1e-12);
        assert_eq!(of("f2"), 0.0);
        assert!(rank_features(&d, RankMethod::InfoGain, 1).is_err());
    }

    #[test]
    fn duplicate_column_has_one_survivor() {
        let y: Vec<bool> = (0..30).map(|i| i % 3 == 0).collect();
        let a: Vec<f64> = (0..30).map(|i| if i % 3 == 0 { i as f64 } else { -(i as f64) }).collect();
        let b: Vec<f64> = (0..30).map(|i| ((i * 17) % 11) as f64).collect();
        let d = ds(vec![a.clone(), a, b], y);
        let kept = select_features(&d, 3, 0.9, 10).unwrap();
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0], "f0");
        assert!(kept.contains(&"f2".to_owned()));
    }

    #[test]
    fn method_names() {
        assert_eq!("chi2".parse::<RankMethod>().unwrap(), RankMethod::ChiSquared);
        assert_eq!("infogain".parse::<RankMethod>().unwrap(), RankMethod::InfoGain);
        assert!("mdl".parse::<RankMethod>().is_err());
    }

    proptest! {
        #[test]
        fn ranking_invariant_under_monotone_transforms(
            xs in proptest::collection::vec((-1000i32..1000).prop_map(f64::from), 8..60),
            seed in any::<u64>(),
        ) {
            let y: Vec<bool> = (0..xs.len()).map(|i| (seed >> (i % 64)) & 1 == 1 || i == 0).collect();
            prop_assume!(y.iter().any(|b| !b));
            let cubed: Vec<f64> = xs.iter().map(|x| x * x * x + 3.0 * x).collect();
            let shifted: Vec<f64> = xs.iter().map(|x| (x / 100.0).exp()).collect();
            let d = ds(vec![xs.clone(), cubed, shifted], y);
            for m in [RankMethod::InfoGain, RankMethod::ChiSquared] {
                let r = rank_features(&d, m, 5).unwrap();
                let s: Vec<f64> = r.scores.iter().map(|x| x.1).collect();
                prop_assert!((s[0] - s[1]).abs() < 1e-9 && (s[1] - s[2]).abs() < 1e-9);
                prop_assert!(s.iter().all(|v| *v >= 0.0));
            }
            let h = {
                let p = d.targets.iter().filter(|b| **b).count() as f64 / d.len() as f64;
                brute_entropy(&[p, 1.0 - p])
            };
            let ig = rank_features(&d, RankMethod::InfoGain, 5).unwrap();
            prop_assert!(ig.scores[0].1 <= h + 1e-12);
        }
    }
}
