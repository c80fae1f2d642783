use std::collections::BTreeSet;
use std::path::Path;

use crate::domain::AccountSnapshot;
use crate::error::{Error, Result};
use crate::text::folded_tokens;

use super::content::require_window;
use super::Partial;

/// Case-folded spam terms matched against whole tokens of the raw text.
///
/// A term with several words matches a run of consecutive tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpamDictionary {
    terms: BTreeSet<String>,
}

impl SpamDictionary {
    pub fn new<I, S>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let terms: BTreeSet<String> = terms
            .into_iter()
            .map(|t| folded_tokens(t.as_ref()).collect::<Vec<_>>().join(" "))
            .filter(|t| !t.is_empty())
            .collect();
        if terms.is_empty() {
            return Err(Error::input("spam dictionary is empty"));
        }
        Ok(SpamDictionary { terms })
    }

    /// One term per line; `#` lines are comments.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Input(m) => Error::input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            s.push_str(t);
            s.push('\n');
        }
        s
    }

    pub fn matches(&self, text: &str) -> bool {
        let tokens: Vec<String> = folded_tokens(text).collect();
        phrase_hit(&tokens, self.terms.iter().map(String::as_str))
    }
}

/// True when any space-separated phrase occurs as a run of `tokens`.
pub(crate) fn phrase_hit<'a>(tokens: &[String], phrases: impl IntoIterator<Item = &'a str>) -> bool {
    phrases.into_iter().any(|phrase| {
        let words: Vec<&str> = phrase.split(' ').collect();
        !words.is_empty()
            && tokens.len() >= words.len()
            && tokens
                .windows(words.len())
                .any(|w| w.iter().zip(&words).all(|(a, b)| a == b))
    })
}

/// Fraction of window tweets containing at least one dictionary term.
pub fn dictionary_feature(acc: &AccountSnapshot, dict: &SpamDictionary) -> Result<Partial> {
    require_window(acc)?;
    if dict.is_empty() {
        return Err(Error::input("spam dictionary is empty"));
    }
    let hits = acc
        .recent_tweets
        .iter()
        .filter(|t| dict.matches(&t.text))
        .count();
    Ok(vec![(
        "frac_tweets_spamterm",
        hits as f64 / acc.recent_tweets.len() as f64,
    )])
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    fn frac(texts: &[&str], dict: &SpamDictionary) -> f64 {
        let ts = texts.iter().enumerate().map(|(i, s)| tweet(i, s)).collect();
        dictionary_feature(&account(ts), dict).unwrap()[0].1
    }

    #[test]
    fn fraction_of_matching_tweets() {
        let d = SpamDictionary::new(["followers"]).unwrap();
        let mut texts = vec!["nothing here"; 8];
        texts.push("Buy FOLLOWERS now");
        texts.push("cheap followers!");
        assert_eq!(frac(&texts, &d), 0.2);
        assert_eq!(frac(&["a", "b"], &d), 0.0);
        assert_eq!(frac(&["followers", "more followers"], &d), 1.0);
    }

    #[test]
    fn whole_tokens_only() {
        let d = SpamDictionary::new(["follow"]).unwrap();
        assert!(!d.matches("followers"));
        assert!(d.matches("follow me"));
    }

    #[test]
    fn phrases_and_folding_dedupe() {
        let d = SpamDictionary::new(["Auto Retweet", "auto retweet", "متابعين"]).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.matches("best AUTO retweet service"));
        assert!(!d.matches("auto and retweet"));
        assert!(d.matches("زيادة متابعين"));
    }

    #[test]
    fn empty_dictionary_is_an_error() {
        assert!(SpamDictionary::new(Vec::<String>::new()).is_err());
        assert!(SpamDictionary::parse("# only comments\n").is_err());
    }
}
