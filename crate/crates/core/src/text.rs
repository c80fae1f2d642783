//! Tweet text normalization used by the similarity features.

/// True for tokens treated as URLs: `http://`, `https://` or `www.` prefixes,
/// compared case-insensitively.
pub fn is_url_token(token: &str) -> bool {
    const PREFIXES: [&str; 3] = ["http://", "https://", "www."];
    PREFIXES.iter().any(|p| {
        token
            .get(..p.len())
            .is_some_and(|head| head.eq_ignore_ascii_case(p))
    })
}

/// Strip hashtags, mentions, URLs and a leading `RT` marker, then collapse
/// whitespace.
///
/// Only the first surviving token can be the retweet marker; `"RT"` elsewhere
/// is ordinary text. Surviving tokens are kept byte-for-byte.
pub fn normalize_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        if tok.starts_with('#') || tok.starts_with('@') || is_url_token(tok) {
            continue;
        }
        if out.is_empty() {
            if tok == "RT" {
                continue;
            }
        } else {
            out.push(' ');
        }
        out.push_str(tok);
    }
    out
}

/// Number of whitespace-delimited tokens in the raw text.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Lower-cased tokens with surrounding punctuation trimmed; empty tokens dropped.
pub(crate) fn folded_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split_whitespace().filter_map(|tok| {
        let trimmed = tok.trim_matches(|c: char| !c.is_alphanumeric());
        (!trimmed.is_empty()).then(|| trimmed.to_lowercase())
    })
}
