use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

use crate::domain::AccountSnapshot;
use crate::error::{Error, Result};

use super::Blacklist;

pub const DEFAULT_MAX_HOPS: u32 = 10;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{0}")]
pub struct TransportError(pub String);

/// One step of redirect following.
///
/// Implementations must be safe to call from several threads at once.
pub trait UrlResolver: Send + Sync {
    /// The `Location` the URL redirects to, or `None` when it does not redirect.
    fn redirect_target(&self, url: &str) -> Result<Option<String>, TransportError>;
}

/// Table-driven resolver: `from -> to` redirect pairs.
#[derive(Debug, Clone, Default)]
pub struct MockResolver {
    redirects: HashMap<String, String>,
    failing: BTreeSet<String>,
}

impl MockResolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_redirect(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.redirects.insert(from.into(), to.into());
        self
    }

    /// Make requests for `url` fail with a transport error.
    pub fn with_failure(mut self, url: impl Into<String>) -> Self {
        self.failing.insert(url.into());
        self
    }

    /// Load `from,to` CSV rows (header optional).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(false)
            .from_reader(text.as_bytes());
        let mut resolver = MockResolver::new();
        for (idx, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::input(format!("redirect table row {}: {e}", idx + 1)))?;
            if rec.len() != 2 {
                return Err(Error::input(format!("redirect table row {}: expected 2 columns", idx + 1)));
            }
            if idx == 0 && &rec[0] == "from" && &rec[1] == "to" {
                continue;
            }
            resolver.redirects.insert(rec[0].to_owned(), rec[1].to_owned());
        }
        Ok(resolver)
    }
}

impl UrlResolver for MockResolver {
    fn redirect_target(&self, url: &str) -> Result<Option<String>, TransportError> {
        if self.failing.contains(url) {
            return Err(TransportError(format!("connection refused: {url}")));
        }
        Ok(self.redirects.get(url).cloned())
    }
}

/// Follows redirects over real HTTP, one hop per request.
#[cfg(feature = "http")]
pub struct HttpResolver {
    agent: ureq::Agent,
}

#[cfg(feature = "http")]
impl HttpResolver {
    pub fn new(timeout: std::time::Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .max_redirects(0)
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build();
        HttpResolver {
            agent: config.into(),
        }
    }
}

#[cfg(feature = "http")]
impl Default for HttpResolver {
    fn default() -> Self {
        Self::new(std::time::Duration::from_secs(10))
    }
}

#[cfg(feature = "http")]
impl UrlResolver for HttpResolver {
    fn redirect_target(&self, url: &str) -> Result<Option<String>, TransportError> {
        let resp = self
            .agent
            .head(url)
            .call()
            .map_err(|e| TransportError(e.to_string()))?;
        if !resp.status().is_redirection() {
            return Ok(None);
        }
        Ok(resp
            .headers()
            .get("location")
            .and_then(|v| v.to_str().ok())
            .map(str::to_owned))
    }
}

/// Outcome of following one URL's redirect chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrlResolution {
    pub original: String,
    #[serde(rename = "final")]
    pub final_url: String,
    pub redirect_hops: u32,
    pub blacklisted: bool,
    /// Set when the chain stopped early: network failure, a bad `Location`,
    /// or more than `max_hops` redirects.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport_error: Option<String>,
}

/// Follow `url` through `resolver` for at most `max_hops` redirects.
pub fn resolve_url(
    resolver: &dyn UrlResolver,
    url: &str,
    blacklist: &Blacklist,
    max_hops: u32,
) -> Result<UrlResolution> {
    let mut current_url =
        Url::parse(url).map_err(|e| Error::input(format!("invalid URL `{url}`: {e}")))?;
    let mut current = url.to_owned();
    let mut hops = 0u32;
    let mut transport_error = None;

    loop {
        match resolver.redirect_target(&current) {
            Ok(None) => break,
            Ok(Some(location)) => {
                if hops == max_hops {
                    transport_error = Some(format!("redirect limit of {max_hops} exceeded"));
                    break;
                }
                match current_url.join(&location) {
                    Ok(next) => {
                        // Absolute targets keep their exact spelling.
                        current = if Url::parse(&location).is_ok() {
                            location
                        } else {
                            next.to_string()
                        };
                        current_url = next;
                        hops += 1;
                    }
                    Err(e) => {
                        transport_error = Some(format!("bad redirect target `{location}`: {e}"));
                        break;
                    }
                }
            }
            Err(e) => {
                transport_error = Some(e.0);
                break;
            }
        }
    }

    Ok(UrlResolution {
        original: url.to_owned(),
        blacklisted: current_url
            .host_str()
            .is_some_and(|h| blacklist.contains_host(h)),
        final_url: current,
        redirect_hops: hops,
        transport_error,
    })
}

/// Resolve every distinct URL in the snapshots and rewrite tweet URLs to
/// their final form. Unparseable URLs are kept as posted.
///
/// Returns the resolutions sorted by original URL.
pub fn expand_urls(
    snapshots: &mut [AccountSnapshot],
    resolver: &dyn UrlResolver,
    blacklist: &Blacklist,
    max_hops: u32,
) -> Vec<UrlResolution> {
    let distinct: BTreeSet<&str> = snapshots
        .iter()
        .flat_map(|s| &s.recent_tweets)
        .flat_map(|t| &t.urls)
        .map(String::as_str)
        .collect();
    let distinct: Vec<&str> = distinct.into_iter().collect();
    let resolutions: Vec<UrlResolution> = distinct
        .par_iter()
        .filter_map(|u| resolve_url(resolver, u, blacklist, max_hops).ok())
        .collect();
    let finals: HashMap<String, String> = resolutions
        .iter()
        .map(|r| (r.original.clone(), r.final_url.clone()))
        .collect();
    for t in snapshots.iter_mut().flat_map(|s| &mut s.recent_tweets) {
        for u in &mut t.urls {
            if let Some(f) = finals.get(u.as_str()) {
                u.clone_from(f);
            }
        }
    }
    resolutions
}
