use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::domain::{AccountSnapshot, Timestamp, TweetRecord};
use crate::error::{Error, Result};

/// Scalar profile fields of an [`AccountSnapshot`], as carried by `profile` lines.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProfileRecord {
    account_id: String,
    screen_name: String,
    created_at: Timestamp,
    followers_count: u64,
    friends_count: u64,
    statuses_count: u64,
    listed_count: u64,
    favourites_count: u64,
    snapshot_at: Timestamp,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CorpusRecord {
    Profile(ProfileRecord),
    Tweet(TweetRecord),
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CorpusRecordRef<'a> {
    Profile(ProfileRecord),
    Tweet(&'a TweetRecord),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Abort on the first malformed line instead of skipping it.
    pub strict: bool,
}

/// Counters for everything `parse_corpus` skipped or dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestWarnings {
    pub malformed_lines: usize,
    pub duplicate_tweets: usize,
    pub duplicate_profiles: usize,
    /// Accounts that had tweets but no profile line.
    pub accounts_without_profile: usize,
}

impl IngestWarnings {
    pub fn total(&self) -> usize {
        self.malformed_lines
            + self.duplicate_tweets
            + self.duplicate_profiles
            + self.accounts_without_profile
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedCorpus {
    /// Sorted by account_id.
    pub snapshots: Vec<AccountSnapshot>,
    pub warnings: IngestWarnings,
}

pub fn parse_corpus(path: &Path, opts: ParseOptions) -> Result<ParsedCorpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus_reader(BufReader::new(file), path, opts)
}

/// Parse a corpus from any buffered reader; `path` is only used in diagnostics.
pub fn parse_corpus_reader<R: BufRead>(
    reader: R,
    path: &Path,
    opts: ParseOptions,
) -> Result<ParsedCorpus> {
    let mut warnings = IngestWarnings::default();
    let mut profiles: BTreeMap<String, ProfileRecord> = BTreeMap::new();
    let mut tweets: BTreeMap<String, Vec<TweetRecord>> = BTreeMap::new();
    let mut seen_tweets: HashSet<String> = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str::<CorpusRecord>(&line)
            .map_err(|e| e.to_string())
            .and_then(|r| check_record(&r).map(|()| r).map_err(|e| e.to_string()));
        let record = match record {
            Ok(r) => r,
            Err(message) => {
                if opts.strict {
                    return Err(Error::Parse {
                        path: path.to_owned(),
                        line: lineno,
                        message,
                    });
                }
                warn!("{}:{lineno}: skipping malformed record: {message}", path.display());
                warnings.malformed_lines += 1;
                continue;
            }
        };
        match record {
            CorpusRecord::Profile(p) => {
                if profiles.contains_key(&p.account_id) {
                    warnings.duplicate_profiles += 1;
                } else {
                    profiles.insert(p.account_id.clone(), p);
                }
            }
            CorpusRecord::Tweet(t) => {
                if !seen_tweets.insert(t.tweet_id.clone()) {
                    warnings.duplicate_tweets += 1;
                    continue;
                }
                tweets.entry(t.author_id.clone()).or_default().push(t);
            }
        }
    }

    for author in tweets.keys() {
        if !profiles.contains_key(author) {
            warnings.accounts_without_profile += 1;
        }
    }
    if warnings.accounts_without_profile > 0 {
        warn!(
            "{}: dropped {} accounts without a profile record",
            path.display(),
            warnings.accounts_without_profile
        );
    }

    let snapshots = profiles
        .into_values()
        .map(|p| {
            let recent = tweets.remove(&p.account_id).unwrap_or_default();
            let mut snap = AccountSnapshot {
                account_id: p.account_id,
                screen_name: p.screen_name,
                created_at: p.created_at,
                followers_count: p.followers_count,
                friends_count: p.friends_count,
                statuses_count: p.statuses_count,
                listed_count: p.listed_count,
                favourites_count: p.favourites_count,
                recent_tweets: recent,
                snapshot_at: p.snapshot_at,
            };
            snap.normalize_window();
            snap
        })
        .collect();

    Ok(ParsedCorpus {
        snapshots,
        warnings,
    })
}

fn check_record(r: &CorpusRecord) -> Result<()> {
    match r {
        CorpusRecord::Profile(p) => {
            if p.account_id.is_empty() {
                return Err(Error::input("account_id must be non-empty"));
            }
            if p.snapshot_at < p.created_at {
                return Err(Error::input("snapshot_at precedes created_at"));
            }
            Ok(())
        }
        CorpusRecord::Tweet(t) => t.validate(),
    }
}

/// Write snapshots back out in corpus form: a profile line followed by its tweets.
pub fn write_corpus<W: Write>(mut out: W, snapshots: &[AccountSnapshot]) -> Result<()> {
    for s in snapshots {
        let profile = CorpusRecordRef::Profile(ProfileRecord {
            account_id: s.account_id.clone(),
            screen_name: s.screen_name.clone(),
            created_at: s.created_at,
            followers_count: s.followers_count,
            friends_count: s.friends_count,
            statuses_count: s.statuses_count,
            listed_count: s.listed_count,
            favourites_count: s.favourites_count,
            snapshot_at: s.snapshot_at,
        });
        write_line(&mut out, &profile)?;
        for t in &s.recent_tweets {
            write_line(&mut out, &CorpusRecordRef::Tweet(t))?;
        }
    }
    Ok(())
}

/// Snapshot store: one JSON-encoded [`AccountSnapshot`] per line.
pub fn write_snapshot_store<W: Write>(mut out: W, snapshots: &[AccountSnapshot]) -> Result<()> {
    for s in snapshots {
        write_line(&mut out, s)?;
    }
    Ok(())
}

pub fn read_snapshot_store(path: &Path) -> Result<Vec<AccountSnapshot>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let snap: AccountSnapshot =
            serde_json::from_str(&line).map_err(|e| Error::Parse {
                path: path.to_owned(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        snap.validate().map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push(snap);
    }
    Ok(out)
}

fn write_line<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
        .map_err(|e| Error::io("<output>", e))
}
