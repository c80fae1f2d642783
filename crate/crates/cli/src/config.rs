use std::path::{Path, PathBuf};

use serde::Deserialize;
use trendspam_core::domain::AUTOMATION_THRESHOLD;
use trendspam_core::features::DUPLICATE_THRESHOLD;
use trendspam_core::learn::TrainConfig;

use crate::commands::CliError;

/// Pipeline settings read from a TOML file.  Every section is optional;
/// unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub thresholds: Thresholds,
    pub learn: TrainConfig,
    pub seeds: Seeds,
    pub evaluate: EvaluateConfig,
    pub hunt: HuntConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub snapshots: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub blacklist: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub edges: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub automation: f64,
    pub duplicate: f64,
    pub corr: f64,
    pub top_k: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            automation: AUTOMATION_THRESHOLD,
            duplicate: DUPLICATE_THRESHOLD,
            corr: 0.9,
            top_k: 20,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Seeds {
    pub train: u64,
    pub evaluate: u64,
    pub synth: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluateConfig {
    pub k: usize,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        EvaluateConfig { k: 10 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HuntConfig {
    pub max_depth: usize,
    pub max_accounts: usize,
}

impl Default for HuntConfig {
    fn default() -> Self {
        HuntConfig {
            max_depth: 2,
            max_accounts: 1000,
        }
    }
}

fn unit_interval(name: &str, v: f64, closed_low: bool) -> Result<(), CliError> {
    let ok = if closed_low { (0.0..=1.0).contains(&v) } else { v > 0.0 && v <= 1.0 };
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {v} is outside its range")))
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let cfg: PipelineConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let t = &self.thresholds;
        unit_interval("thresholds.automation", t.automation, true)?;
        unit_interval("thresholds.duplicate", t.duplicate, true)?;
        unit_interval("thresholds.corr", t.corr, false)?;
        if t.top_k == 0 {
            return Err(CliError::Config("thresholds.top_k must be positive".into()));
        }
        if self.learn.bins < 2 {
            return Err(CliError::Config("learn.bins must be at least 2".into()));
        }
        if self.learn.n_trees == 0 || self.learn.min_leaf == 0 {
            return Err(CliError::Config("learn.n_trees and learn.min_leaf must be positive".into()));
        }
        if self.evaluate.k < 2 {
            return Err(CliError::Config("evaluate.k must be at least 2".into()));
        }
        if self.hunt.max_depth == 0 || self.hunt.max_accounts == 0 {
            return Err(CliError::Config("hunt limits must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config_parses() {
        let cfg: PipelineConfig = toml::from_str(
            r#"
            [paths]
            catalog = "sources.csv"
            [thresholds]
            automation = 0.75
            top_k = 15
            [learn]
            n_trees = 50
            max_depth = 8
            [seeds]
            train = 7
            [hunt]
            max_accounts = 10
            "#,
        )
        .unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.paths.catalog.as_deref(), Some(Path::new("sources.csv")));
        assert_eq!(cfg.learn.n_trees, 50);
        assert_eq!(cfg.learn.max_depth, Some(8));
        assert_eq!(cfg.learn.boost_rounds, 50);
        assert_eq!(cfg.thresholds.corr, 0.9);
        assert_eq!(cfg.hunt.max_depth, 2);
    }

    #[test]
    fn unknown_keys_and_bad_ranges_are_rejected() {
        assert!(toml::from_str::<PipelineConfig>("[paths]\ncorpse = \"x\"").is_err());
        assert!(toml::from_str::<PipelineConfig>("[extra]\na = 1").is_err());
        let cfg: PipelineConfig = toml::from_str("[thresholds]\nautomation = 1.5").unwrap();
        assert!(cfg.validate().is_err());
        let cfg: PipelineConfig = toml::from_str("[thresholds]\ncorr = 0.0").unwrap();
        assert!(cfg.validate().is_err());
    }
}
