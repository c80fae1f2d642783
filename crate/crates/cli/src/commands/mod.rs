pub mod extract;
pub mod hunt;
pub mod ingest;
pub mod label;
pub mod learn;
pub mod synth;

use std::io::Write;
use std::path::{Path, PathBuf};

use trendspam_core::features::parse_feature_list;
use trendspam_core::learn::feature_set_preset;
use trendspam_core::Error;

use crate::output::write_atomic;
use crate::FeatureSetArgs;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
        }
    }

    /// 1 for problems with the caller's inputs, 2 for internal failures.
    pub fn exit_status(&self) -> u8 {
        match self {
            CliError::Core(Error::Serde(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// The flag value, else the configured path, else a usage error.
pub fn required_path(flag: &Option<PathBuf>, configured: &Option<PathBuf>, name: &str) -> CliResult<PathBuf> {
    flag.clone()
        .or_else(|| configured.clone())
        .ok_or_else(|| CliError::Usage(format!("missing --{name} (or paths.{name} in the config file)")))
}

/// Run a core writer against an atomically replaced file.
pub fn write_with<F>(path: &Path, fill: F) -> CliResult
where
    F: FnOnce(&mut dyn Write) -> trendspam_core::Result<()>,
{
    write_atomic(path, |w| {
        fill(w)?;
        w.flush().map_err(|e| {
            CliError::Core(Error::Io {
                path: path.to_owned(),
                source: e,
            })
        })
    })
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| {
        CliError::Core(Error::Io {
            path: path.to_owned(),
            source: e,
        })
    })
}

/// Non-blank lines that are not `#` comments, trimmed.
pub fn read_lines(path: &Path) -> CliResult<Vec<String>> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect())
}

/// `(name, features)` chosen by `--preset` or `--feature-list`; defaults to
/// the `paper-selected` preset.
pub fn feature_set(args: &FeatureSetArgs) -> CliResult<(String, Vec<String>)> {
    if let Some(path) = &args.feature_list {
        let names = parse_feature_list(&read_text(path)?);
        if names.is_empty() {
            return Err(CliError::Usage(format!("{}: feature list is empty", path.display())));
        }
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        return Ok((label, names));
    }
    let name = args.preset.as_deref().unwrap_or("paper-selected");
    Ok((name.to_owned(), feature_set_preset(name)?))
}
