//! Corpus ingestion: line-delimited dumps into account snapshots, the
//! source catalog, and URL expansion through a pluggable resolver.

mod catalog;
mod corpus;
mod report;
mod resolver;

pub use catalog::{classify_source, Blacklist, CatalogEntry, SourceCatalog};
pub use corpus::{
    parse_corpus, parse_corpus_reader, read_snapshot_store, write_corpus, write_snapshot_store,
    IngestWarnings, ParseOptions, ParsedCorpus,
};
pub use report::{source_activity_report, SourceShare};
pub use resolver::{
    expand_urls, resolve_url, MockResolver, TransportError, UrlResolution, UrlResolver,
    DEFAULT_MAX_HOPS,
};
#[cfg(feature = "http")]
pub use resolver::HttpResolver;
