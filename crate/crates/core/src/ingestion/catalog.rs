use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::domain::SourceCategory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub category: SourceCategory,
    pub notes: String,
}

/// Curated mapping from tweet source name to category.
///
/// Lookups are exact on the name; absent names are [`SourceCategory::Unknown`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceCatalog {
    entries: IndexMap<String, CatalogEntry>,
}

#[derive(Serialize, Deserialize)]
struct CatalogRow {
    source_name: String,
    category: String,
    #[serde(default)]
    notes: String,
}

impl SourceCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, category: SourceCategory, notes: impl Into<String>) {
        self.entries.insert(
            name.into(),
            CatalogEntry {
                category,
                notes: notes.into(),
            },
        );
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.get(name)
    }

    pub fn category(&self, name: &str) -> SourceCategory {
        self.entries
            .get(name)
            .map_or(SourceCategory::Unknown, |e| e.category)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CatalogEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Read the `source_name,category,notes` CSV form.
    pub fn from_reader<R: Read>(reader: R, origin: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
        let mut catalog = SourceCatalog::new();
        for (idx, row) in rdr.deserialize::<CatalogRow>().enumerate() {
            let parse_err = |message: String| Error::Parse {
                path: origin.to_owned(),
                line: idx + 2,
                message,
            };
            let row = row.map_err(|e| parse_err(e.to_string()))?;
            let category = row
                .category
                .parse::<SourceCategory>()
                .map_err(|e| parse_err(e.to_string()))?;
            if catalog.entries.contains_key(&row.source_name) {
                return Err(parse_err(format!("duplicate source `{}`", row.source_name)));
            }
            catalog.insert(row.source_name, category, row.notes);
        }
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file, path)
    }

    pub fn write<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let csv_err = |e: csv::Error| Error::io("<catalog>", std::io::Error::other(e));
        wtr.write_record(["source_name", "category", "notes"])
            .map_err(csv_err)?;
        for (name, entry) in &self.entries {
            wtr.write_record([name.as_str(), entry.category.as_str(), entry.notes.as_str()])
                .map_err(csv_err)?;
        }
        wtr.flush().map_err(|e| Error::io("<catalog>", e))
    }
}

/// Exact-name source lookup.
pub fn classify_source(catalog: &SourceCatalog, source_name: &str) -> SourceCategory {
    catalog.category(source_name)
}

/// Set of blacklisted hostnames, compared case-insensitively.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Blacklist {
    hosts: HashSet<String>,
}

impl Blacklist {
    pub fn new<I, S>(hosts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Blacklist {
            hosts: hosts
                .into_iter()
                .map(|h| h.as_ref().trim().to_ascii_lowercase())
                .filter(|h| !h.is_empty())
                .collect(),
        }
    }

    /// One hostname per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        Blacklist::new(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or_default()),
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn contains_host(&self, host: &str) -> bool {
        self.hosts.contains(&host.to_ascii_lowercase())
    }

    /// True when the URL parses and its host is listed.
    pub fn contains_url(&self, url: &str) -> bool {
        url::Url::parse(url)
            .ok()
            .and_then(|u| u.host_str().map(|h| self.contains_host(h)))
            .unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.hosts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hosts.is_empty()
    }
}
