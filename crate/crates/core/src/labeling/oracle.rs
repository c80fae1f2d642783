//! Human verdict providers: the questions asked during labeling and the
//! scripted and interactive ways of answering them.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::domain::{AccountSnapshot, TweetRecord};
use crate::error::{Error, Result};

/// A question a human labeler can be asked, with a closed answer set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Question {
    /// Does the tweet's topic relate to the hashtag / trend it carries?
    TopicRelated,
    /// Does the linked page relate to the tweet text or hashtag?
    UrlPageRelated,
    /// Is the tweet advertising by hijacking hashtags or mass-mentioning?
    AutomatedAdvertising,
    /// Automated account, legitimate evidence: any spam in the recent tweets?
    RecentSpam,
    /// Human account, spam evidence: what kind of spamming is it?
    SpammingBehavior,
    /// Keep this candidate term in the spam dictionary?
    AcceptTerm,
}

impl Question {
    pub const ALL: [Question; 6] = [
        Question::TopicRelated,
        Question::UrlPageRelated,
        Question::AutomatedAdvertising,
        Question::RecentSpam,
        Question::SpammingBehavior,
        Question::AcceptTerm,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Question::TopicRelated => "topic-related",
            Question::UrlPageRelated => "url-page-related",
            Question::AutomatedAdvertising => "automated-advertising",
            Question::RecentSpam => "recent-spam",
            Question::SpammingBehavior => "spamming-behavior",
            Question::AcceptTerm => "accept-term",
        }
    }

    pub fn answers(self) -> &'static [&'static str] {
        match self {
            Question::TopicRelated | Question::UrlPageRelated => &["related", "unrelated"],
            Question::AutomatedAdvertising | Question::RecentSpam => &["yes", "no"],
            Question::SpammingBehavior => &["constant", "subscribed-app", "one-off"],
            Question::AcceptTerm => &["accept", "reject"],
        }
    }

    pub fn prompt(self) -> &'static str {
        match self {
            Question::TopicRelated => "Is the tweet topic related to the hashtags / trend it contains?",
            Question::UrlPageRelated => "Does the URL lead to a page related to the tweet text or hashtag?",
            Question::AutomatedAdvertising => {
                "Is the tweet advertising by hijacking hashtags or mentioning users in an automated way?"
            }
            Question::RecentSpam => "Automated account with legitimate evidence: is there spam in its recent tweets?",
            Question::SpammingBehavior => {
                "Human account with spam evidence: is the spamming constant, injected by a subscribed app, or a one-off?"
            }
            Question::AcceptTerm => "Keep this term in the spam dictionary?",
        }
    }

    /// Which of the tweet-level questions this is.
    fn subject(self) -> Subject {
        match self {
            Question::TopicRelated | Question::UrlPageRelated | Question::AutomatedAdvertising => {
                Subject::Tweet
            }
            Question::RecentSpam | Question::SpammingBehavior => Subject::Account,
            Question::AcceptTerm => Subject::Term,
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Question::ALL
            .into_iter()
            .find(|q| q.id() == s)
            .ok_or_else(|| Error::Lookup {
                kind: "question",
                name: s.to_owned(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Subject {
    Tweet,
    Account,
    Term,
}

/// Everything a provider may need to answer one question.
#[derive(Debug, Clone, Copy)]
pub struct Query<'a> {
    pub question: Question,
    pub account_id: Option<&'a str>,
    pub account: Option<&'a AccountSnapshot>,
    pub tweet: Option<&'a TweetRecord>,
    pub context_hashtag: Option<&'a str>,
    pub term: Option<&'a str>,
}

impl<'a> Query<'a> {
    pub fn about_tweet(question: Question, tweet: &'a TweetRecord, context_hashtag: Option<&'a str>) -> Self {
        Query {
            question,
            account_id: Some(&tweet.author_id),
            account: None,
            tweet: Some(tweet),
            context_hashtag,
            term: None,
        }
    }

    pub fn about_account(question: Question, account: &'a AccountSnapshot) -> Self {
        Query {
            question,
            account_id: Some(&account.account_id),
            account: Some(account),
            tweet: None,
            context_hashtag: None,
            term: None,
        }
    }

    pub fn about_term(term: &'a str) -> Self {
        Query {
            question: Question::AcceptTerm,
            account_id: None,
            account: None,
            tweet: None,
            context_hashtag: None,
            term: Some(term),
        }
    }

    fn key(&self) -> ScriptKey {
        let q = self.question;
        ScriptKey {
            question_id: q.id().to_owned(),
            account_id: (q.subject() != Subject::Term)
                .then(|| self.account_id.map(str::to_owned))
                .flatten(),
            tweet_id: (q.subject() == Subject::Tweet)
                .then(|| self.tweet.map(|t| t.tweet_id.clone()))
                .flatten(),
            term: (q.subject() == Subject::Term)
                .then(|| self.term.map(str::to_owned))
                .flatten(),
        }
    }
}

/// Source of human verdicts for labeling questions.
pub trait HumanVerdictProvider: Sync {
    /// Raw answer; validated against the question's answer set by [`ask`].
    fn answer(&self, query: &Query<'_>) -> Result<String>;

    /// Recorded as `labeler` on produced labels.
    fn labeler(&self) -> &str {
        "scripted"
    }

    /// False when questions must be asked one account at a time.
    fn concurrent(&self) -> bool {
        true
    }
}

/// Ask `query` and check the reply against the declared answers.
pub fn ask(oracle: &dyn HumanVerdictProvider, query: &Query<'_>) -> Result<&'static str> {
    let raw = oracle.answer(query)?;
    let answer = raw.trim();
    query
        .question
        .answers()
        .iter()
        .copied()
        .find(|a| *a == answer)
        .ok_or_else(|| {
            Error::Protocol(format!(
                "answer `{answer}` to {} is not one of {:?}",
                query.question,
                query.question.answers()
            ))
        })
}

/// Adapter turning a closure into a provider.
pub struct FnOracle<F>(pub F);

impl<F> HumanVerdictProvider for FnOracle<F>
where
    F: Fn(&Query<'_>) -> String + Sync,
{
    fn answer(&self, query: &Query<'_>) -> Result<String> {
        Ok((self.0)(query))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct ScriptKey {
    question_id: String,
    account_id: Option<String>,
    tweet_id: Option<String>,
    term: Option<String>,
}

/// One line of an answer script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedAnswer {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub account_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tweet_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    pub question_id: String,
    pub answer: String,
}

/// Answers read from a line-delimited script, keyed by
/// (account, tweet or term, question).
#[derive(Debug, Clone, Default)]
pub struct ScriptedOracle {
    answers: HashMap<ScriptKey, String>,
}

impl ScriptedOracle {
    pub fn new(lines: impl IntoIterator<Item = ScriptedAnswer>) -> Result<Self> {
        let mut answers = HashMap::new();
        for a in lines {
            let q: Question = a.question_id.parse()?;
            if !q.answers().contains(&a.answer.as_str()) {
                return Err(Error::Protocol(format!(
                    "scripted answer `{}` to {q} is not one of {:?}",
                    a.answer,
                    q.answers()
                )));
            }
            let key = ScriptKey {
                question_id: a.question_id,
                account_id: a.account_id,
                tweet_id: a.tweet_id,
                term: a.term,
            };
            answers.insert(key, a.answer);
        }
        Ok(ScriptedOracle { answers })
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            lines.push(serde_json::from_str(line).map_err(|e| Error::Parse {
                path: origin.to_owned(),
                line: idx + 1,
                message: e.to_string(),
            })?);
        }
        Self::new(lines)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

impl HumanVerdictProvider for ScriptedOracle {
    fn answer(&self, query: &Query<'_>) -> Result<String> {
        let key = query.key();
        self.answers.get(&key).cloned().ok_or_else(|| {
            Error::Protocol(format!(
                "no scripted answer for {} (account {:?}, tweet {:?}, term {:?})",
                key.question_id, key.account_id, key.tweet_id, key.term
            ))
        })
    }
}

// Unicode first-strong isolate / pop directional isolate.
const FSI: char = '\u{2068}';
const PDI: char = '\u{2069}';

/// Asks questions on a terminal, re-prompting until the reply is valid.
pub struct InteractiveOracle<R, W> {
    io: Mutex<(R, W)>,
    labeler: String,
}

impl<R: BufRead + Send, W: Write + Send> InteractiveOracle<R, W> {
    pub fn new(input: R, output: W, labeler: impl Into<String>) -> Self {
        InteractiveOracle {
            io: Mutex::new((input, output)),
            labeler: labeler.into(),
        }
    }
}

fn render(query: &Query<'_>, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out)?;
    if let Some(id) = query.account_id {
        writeln!(out, "account: {id}")?;
    }
    if let Some(tag) = query.context_hashtag {
        writeln!(out, "trend: {FSI}#{tag}{PDI}")?;
    }
    if let Some(t) = query.tweet {
        writeln!(out, "tweet {}: {FSI}{}{PDI}", t.tweet_id, t.text)?;
        for u in &t.urls {
            writeln!(out, "  url: {u}")?;
        }
    }
    if let Some(acc) = query.account {
        for t in acc.recent_tweets.iter().take(20) {
            writeln!(out, "  [{}] {FSI}{}{PDI}", t.source_name, t.text)?;
        }
        if acc.recent_tweets.len() > 20 {
            writeln!(out, "  ... {} more", acc.recent_tweets.len() - 20)?;
        }
    }
    if let Some(term) = query.term {
        writeln!(out, "term: {FSI}{term}{PDI}")?;
    }
    write!(
        out,
        "{} [{}] ",
        query.question.prompt(),
        query.question.answers().join("/")
    )?;
    out.flush()
}

impl<R: BufRead + Send, W: Write + Send> HumanVerdictProvider for InteractiveOracle<R, W> {
    fn answer(&self, query: &Query<'_>) -> Result<String> {
        let mut guard = self.io.lock().unwrap_or_else(|p| p.into_inner());
        let (input, output) = &mut *guard;
        let io_err = |e| Error::io("<terminal>", e);
        loop {
            render(query, output).map_err(io_err)?;
            let mut line = String::new();
            if input.read_line(&mut line).map_err(io_err)? == 0 {
                return Err(Error::Protocol(format!(
                    "input closed while asking {}",
                    query.question
                )));
            }
            let reply = line.trim();
            if query.question.answers().contains(&reply) {
                return Ok(reply.to_owned());
            }
            writeln!(output, "please answer one of: {}", query.question.answers().join(", "))
                .map_err(io_err)?;
        }
    }

    fn labeler(&self) -> &str {
        &self.labeler
    }

    fn concurrent(&self) -> bool {
        false
    }
}
