//! Deterministic synthetic corpus of spammer, legitimate and compromised
//! account archetypes.
//!
//! Both classes draw profile counters, window span, tweet counts, retweet
//! counts and per-tweet entity counts from the same distributions, so only
//! the planted behaviors separate them: reused entities under singleton
//! padding, near-duplicate templated text with short random suffixes,
//! dictionary terms, a higher reply rate and automated posting sources.

use std::collections::{BTreeSet, HashSet};
use std::sync::Mutex;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{AccountClass, AccountSnapshot, SourceCategory, TweetRecord, SECONDS_PER_DAY};
use crate::error::Result;
use crate::features::SpamDictionary;
use crate::ingestion::SourceCatalog;
use crate::labeling::{
    automation_index, classify_account, EvidenceRecord, HumanVerdictProvider, LabeledAccount, Query,
    Question, ScriptedAnswer, SpamRules, TweetLabel,
};

/// Features whose class-conditional distributions differ by construction.
pub const PLANTED_FEATURES: [&str; 10] = [
    "nb_replicates",
    "avg_similarity",
    "frac_tweets_spamterm",
    "rate_reply",
    "diversity_url",
    "diversity_hashtag",
    "diversity_mention",
    "adjusted_uses_url",
    "adjusted_uses_hashtag",
    "adjusted_uses_mention",
];

pub const SPAM_TEMPLATES: [&str; 8] = [
    "automatic retweet service for gulf accounts call now on whatsapp",
    "guaranteed followers increase in one day cheap offer message us now",
    "huge discount offer on original perfumes order now via whatsapp today",
    "subscribe to our channel for exclusive promo codes and cheap deals",
    "ريتويت تلقائي حسابات خليجية للتواصل واتساب الان عرض خاص جدا",
    "زيادة متابعين حقيقيين خلال يوم واحد بأسعار خاصة للتواصل واتساب",
    "عرض خاص خصم كبير على جميع المنتجات اطلب الان عبر واتساب فقط",
    "cheap followers and retweets package best offer in the market whatsapp us",
];

const SPAM_TERMS: [&str; 14] = [
    "followers", "retweet", "retweets", "offer", "discount", "whatsapp", "promo", "cheap",
    "guaranteed", "واتساب", "متابعين", "ريتويت", "خصم", "للتواصل",
];

const EN_WORDS: [&str; 96] = [
    "the", "a", "good", "morning", "today", "match", "team", "great", "game", "tonight", "coffee",
    "with", "friends", "family", "weekend", "weather", "sunny", "rain", "school", "exam", "study",
    "book", "reading", "movie", "watching", "music", "new", "song", "love", "this", "that",
    "really", "happy", "tired", "work", "office", "meeting", "lunch", "dinner", "delicious",
    "city", "traffic", "long", "day", "night", "sleep", "early", "late", "trip", "travel",
    "beach", "desert", "camping", "photo", "beautiful", "view", "thanks", "everyone", "support",
    "proud", "win", "lost", "next", "season", "player", "goal", "amazing", "news", "story",
    "learn", "class", "teacher", "students", "project", "finished", "started", "walk", "park",
    "kids", "home", "cooking", "recipe", "tea", "garden", "flowers", "spring", "summer",
    "winter", "holiday", "prayer", "peace", "hope", "dream", "tomorrow", "yesterday", "week",
];

const AR_WORDS: [&str; 40] = [
    "صباح", "الخير", "مساء", "النور", "اليوم", "جميل", "الله", "كتاب", "مباراة", "الفريق",
    "الجو", "رمضان", "كريم", "العمل", "الجامعة", "القهوة", "السفر", "العائلة", "شكرا", "كثيرا",
    "الأصدقاء", "البحر", "المطر", "الصيف", "الشتاء", "الدراسة", "الامتحان", "المدرسة", "الطريق",
    "البيت", "الحمد", "لله", "فرحة", "العيد", "الليل", "النوم", "الغداء", "العشاء", "الرياضة",
    "الوطن",
];

const OFFICIAL_SOURCES: [&str; 4] = [
    "Twitter Web Client",
    "Twitter for iPhone",
    "Twitter for Android",
    "Twitter for iPad",
];
const TRUSTED_SOURCES: [&str; 2] = ["TweetDeck", "Hootsuite"];
const AUTOMATED_SOURCES: [&str; 4] = ["AutoTweetPro", "RetweetBot", "twittbot.net", "Tweet Scheduler X"];
const UNKNOWN_SOURCES: [&str; 3] = ["gulfapp", "zapp-post", "qahwa-tools"];

const SNAPSHOT_AT: i64 = 1_420_070_400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Archetype {
    Spammer,
    Legit,
    Compromised,
}

/// Generated accounts with their ground truth and the artifacts needed to
/// rebuild the labels through the labeling workflow.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub snapshots: Vec<AccountSnapshot>,
    pub labels: Vec<LabeledAccount>,
    pub evidence: Vec<EvidenceRecord>,
    /// Every answer the ground-truth labeler gave, as a replayable script.
    pub answers: Vec<ScriptedAnswer>,
    pub catalog: SourceCatalog,
    pub dictionary: SpamDictionary,
    /// `(follower_id, followee_id)` pairs.
    pub edges: Vec<(String, String)>,
}

pub fn source_catalog() -> SourceCatalog {
    let mut c = SourceCatalog::new();
    for s in OFFICIAL_SOURCES {
        c.insert(s, SourceCategory::Official, "platform client");
    }
    for s in TRUSTED_SOURCES {
        c.insert(s, SourceCategory::Trusted, "reviewed third-party client");
    }
    for s in AUTOMATED_SOURCES {
        c.insert(s, SourceCategory::Automated, "posting automation");
    }
    c
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn pick<'a, R: Rng>(rng: &mut R, xs: &'a [&'a str]) -> &'a str {
    xs.choose(rng).expect("non-empty")
}

struct Social<'a> {
    spammers: &'a [String],
    legit: &'a [String],
}

struct Generated {
    snapshot: AccountSnapshot,
    spam_tweets: HashSet<String>,
    evidence_tweet: String,
}

fn sentence<R: Rng>(rng: &mut R, arabic: bool) -> String {
    let n = rng.random_range(4..=19);
    let words: &[&str] = if arabic { &AR_WORDS } else { &EN_WORDS };
    (0..n).map(|_| pick(rng, words)).collect::<Vec<_>>().join(" ")
}

fn suffix<R: Rng>(rng: &mut R, counter: &mut u32) -> String {
    if rng.random_bool(0.5) {
        *counter += rng.random_range(1..4);
        counter.to_string()
    } else {
        let len = rng.random_range(2..=3);
        (0..len)
            .map(|_| {
                let c = rng.random_range(0..36u32);
                char::from_digit(c, 36).expect("base 36")
            })
            .collect()
    }
}

/// Entity values for `slots` occurrences.  Both classes share the count of
/// distinct values; spammers concentrate the surplus on one dominant value.
fn entity_values<R: Rng>(rng: &mut R, slots: usize, concentrated: bool, make: impl Fn(usize) -> String) -> Vec<String> {
    if slots == 0 {
        return Vec::new();
    }
    let reuse = rng.random_range(1.5..3.0);
    let unique = ((slots as f64 / reuse).round() as usize).clamp(1, slots);
    let mut vals = Vec::with_capacity(slots);
    if concentrated {
        vals.extend(std::iter::repeat_n(make(0), slots - unique + 1));
        vals.extend((1..unique).map(&make));
    } else {
        for k in 0..slots {
            vals.push(make(k % unique));
        }
    }
    vals.shuffle(rng);
    vals
}

fn gen_account(id: &str, arch: Archetype, seed: u64, social: &Social<'_>) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_tweets = rng.random_range(120..=200usize);
    let span_days = log_uniform(&mut rng, 2.0, 120.0);
    let age_days = span_days + log_uniform(&mut rng, 30.0, 2000.0);
    let arabic = rng.random_bool(0.6);
    let retweet_rate = rng.random_range(0.0..0.4);
    let spammer = arch == Archetype::Spammer;
    let reply_rate = if spammer {
        rng.random_range(0.25..0.5)
    } else {
        rng.random_range(0.0..0.15)
    };
    let spam_rate = if spammer { rng.random_range(0.3..0.8) } else { 0.0 };
    let automated_share = if spammer {
        rng.random_range(0.86..1.0)
    } else {
        rng.random_range(0.0..0.3)
    };
    let burst = if arch == Archetype::Compromised {
        (n_tweets as f64 * rng.random_range(0.1..0.2)).round() as usize
    } else {
        0
    };
    let templates: Vec<&str> = {
        let k = rng.random_range(1..=2);
        SPAM_TEMPLATES.choose_multiple(&mut rng, k).copied().collect()
    };

    // Per-tweet entity counts, identical distributions for every archetype.
    let hashtag_counts: Vec<usize> = (0..n_tweets)
        .map(|_| match rng.random_range(0..100) {
            0..40 => 0,
            40..75 => 1,
            75..90 => 2,
            _ => 3,
        })
        .collect();
    let mention_counts: Vec<usize> = (0..n_tweets)
        .map(|_| match rng.random_range(0..100) {
            0..40 => 0,
            40..85 => 1,
            _ => 2,
        })
        .collect();
    let url_counts: Vec<usize> = (0..n_tweets).map(|_| rng.random_bool(0.4) as usize).collect();

    let tag = |k: usize| format!("{id}_tag{k}");
    let concentrated = spammer;
    let mut hashtags = entity_values(&mut rng, hashtag_counts.iter().sum(), concentrated, |k| {
        if k == 0 && concentrated {
            format!("trend{}", seed % 7)
        } else {
            tag(k)
        }
    });
    let mut mentions = entity_values(&mut rng, mention_counts.iter().sum(), concentrated, |k| {
        format!("{id}_peer{k}")
    });
    let mut urls = entity_values(&mut rng, url_counts.iter().sum(), concentrated, |k| {
        format!("https://site{}.example/{id}/{k}", k % 5)
    });

    let pool: &[String] = if spammer { social.spammers } else { social.legit };
    let mut counter = rng.random_range(10..100u32);
    let mut spam_tweets = HashSet::new();
    let mut tweets = Vec::with_capacity(n_tweets);
    let mut times: Vec<i64> = (0..n_tweets)
        .map(|_| SNAPSHOT_AT - (rng.random::<f64>() * span_days * SECONDS_PER_DAY) as i64)
        .collect();
    times.sort_unstable_by(|a, b| b.cmp(a));
    for (i, &created_at) in times.iter().enumerate() {
        let tweet_id = format!("{id}-{i:03}");
        let in_burst = i < burst;
        let is_spam = in_burst || rng.random::<f64>() < spam_rate;
        let body = if is_spam {
            spam_tweets.insert(tweet_id.clone());
            format!("{} {}", pick(&mut rng, &templates), suffix(&mut rng, &mut counter))
        } else {
            sentence(&mut rng, arabic)
        };
        let hs: Vec<String> = hashtags.drain(..hashtag_counts[i]).collect();
        let ms: Vec<String> = mentions.drain(..mention_counts[i]).collect();
        let us: Vec<String> = urls.drain(..url_counts[i]).collect();
        let is_retweet = !in_burst && rng.random::<f64>() < retweet_rate;
        // Replies need a leading mention, so the reply rate is conditioned
        // on tweets that carry one (60% of tweets).
        let is_reply = !is_retweet && !ms.is_empty() && rng.random::<f64>() < reply_rate / 0.6;
        let mut text = String::new();
        if is_retweet {
            text.push_str("RT ");
        }
        if is_reply {
            text.push_str(&format!("@{} ", ms[0]));
        }
        text.push_str(&body);
        for h in &hs {
            text.push_str(&format!(" #{h}"));
        }
        for (k, m) in ms.iter().enumerate() {
            if !(is_reply && k == 0) {
                text.push_str(&format!(" @{m}"));
            }
        }
        for u in &us {
            text.push(' ');
            text.push_str(u);
        }
        let automated = in_burst || rng.random::<f64>() < automated_share;
        let source_name = if automated {
            if rng.random_bool(0.8) {
                pick(&mut rng, &AUTOMATED_SOURCES)
            } else {
                pick(&mut rng, &UNKNOWN_SOURCES)
            }
        } else if rng.random_bool(0.9) {
            pick(&mut rng, &OFFICIAL_SOURCES)
        } else {
            pick(&mut rng, &TRUSTED_SOURCES)
        };
        let retweeted_author_id = is_retweet.then(|| {
            let others: Vec<&String> = pool.iter().filter(|p| *p != id).collect();
            match others.choose(&mut rng) {
                Some(o) => (*o).clone(),
                None => format!("ext{}", rng.random_range(0..1000)),
            }
        });
        tweets.push(TweetRecord {
            tweet_id,
            author_id: id.to_owned(),
            text,
            created_at,
            source_name: source_name.to_owned(),
            source_url: None,
            is_retweet,
            retweeted_author_id,
            retweet_count: log_uniform(&mut rng, 1.0, 500.0) as u64 - 1,
            favorite_count: log_uniform(&mut rng, 1.0, 200.0) as u64 - 1,
            hashtags: hs,
            mentions: ms,
            urls: us,
            image_count: rng.random_bool(0.1) as u32,
        });
    }
    let evidence_tweet = tweets
        .iter()
        .find(|t| spam_tweets.contains(&t.tweet_id) && t.has_entity())
        .or_else(|| tweets.iter().find(|t| !spam_tweets.contains(&t.tweet_id)))
        .unwrap_or(&tweets[0])
        .tweet_id
        .clone();
    let statuses = n_tweets as f64 + log_uniform(&mut rng, 50.0, 50_000.0);
    let mut snapshot = AccountSnapshot {
        account_id: id.to_owned(),
        screen_name: format!("user_{id}"),
        created_at: SNAPSHOT_AT - (age_days * SECONDS_PER_DAY) as i64,
        followers_count: log_uniform(&mut rng, 10.0, 50_000.0) as u64,
        friends_count: log_uniform(&mut rng, 10.0, 5_000.0) as u64,
        statuses_count: statuses as u64,
        listed_count: rng.random_range(0..100),
        favourites_count: log_uniform(&mut rng, 1.0, 10_000.0) as u64,
        recent_tweets: tweets,
        snapshot_at: SNAPSHOT_AT,
    };
    snapshot.normalize_window();
    Generated {
        snapshot,
        spam_tweets,
        evidence_tweet,
    }
}

/// Answers questions from the generator's ground truth and records them.
struct GroundTruth<'a> {
    spam_tweets: &'a HashSet<String>,
    archetype: Archetype,
    log: Mutex<Vec<ScriptedAnswer>>,
}

impl HumanVerdictProvider for GroundTruth<'_> {
    fn answer(&self, q: &Query<'_>) -> Result<String> {
        let spam_tweet = q.tweet.is_some_and(|t| self.spam_tweets.contains(&t.tweet_id));
        let a = match q.question {
            Question::TopicRelated | Question::UrlPageRelated => {
                if spam_tweet {
                    "unrelated"
                } else {
                    "related"
                }
            }
            Question::AutomatedAdvertising => {
                if spam_tweet {
                    "yes"
                } else {
                    "no"
                }
            }
            Question::RecentSpam => {
                if self.archetype == Archetype::Spammer {
                    "yes"
                } else {
                    "no"
                }
            }
            Question::SpammingBehavior => match self.archetype {
                Archetype::Spammer => "constant",
                Archetype::Compromised => "subscribed-app",
                Archetype::Legit => "one-off",
            },
            Question::AcceptTerm => "accept",
        };
        self.log.lock().expect("log lock").push(ScriptedAnswer {
            account_id: q.account_id.map(str::to_owned),
            tweet_id: q.tweet.map(|t| t.tweet_id.clone()),
            term: q.term.map(str::to_owned),
            question_id: q.question.id().to_owned(),
            answer: a.to_owned(),
        });
        Ok(a.to_owned())
    }

    fn labeler(&self) -> &str {
        "synthetic"
    }
}

pub fn gen_synthetic_corpus(
    n_spammers: usize,
    n_legit: usize,
    n_compromised: usize,
    seed: u64,
) -> Result<SyntheticCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kinds: Vec<Archetype> = std::iter::repeat_n(Archetype::Spammer, n_spammers)
        .chain(std::iter::repeat_n(Archetype::Legit, n_legit))
        .chain(std::iter::repeat_n(Archetype::Compromised, n_compromised))
        .collect();
    kinds.shuffle(&mut rng);
    let ids: Vec<String> = (0..kinds.len()).map(|i| format!("u{i:05}")).collect();
    let seeds: Vec<u64> = kinds.iter().map(|_| rng.random()).collect();
    let spammers: Vec<String> = ids
        .iter()
        .zip(&kinds)
        .filter(|(_, k)| **k == Archetype::Spammer)
        .map(|(i, _)| i.clone())
        .collect();
    let legit: Vec<String> = ids
        .iter()
        .zip(&kinds)
        .filter(|(_, k)| **k != Archetype::Spammer)
        .map(|(i, _)| i.clone())
        .collect();
    let social = Social {
        spammers: &spammers,
        legit: &legit,
    };
    let catalog = source_catalog();
    let rules = SpamRules::default();
    let out: Vec<(Generated, LabeledAccount, EvidenceRecord, Vec<ScriptedAnswer>)> = ids
        .par_iter()
        .zip(kinds.par_iter())
        .zip(seeds.par_iter())
        .map(|((id, &kind), &s)| {
            let g = gen_account(id, kind, s, &social);
            let oracle = GroundTruth {
                spam_tweets: &g.spam_tweets,
                archetype: kind,
                log: Mutex::new(Vec::new()),
            };
            let tweet = g
                .snapshot
                .recent_tweets
                .iter()
                .find(|t| t.tweet_id == g.evidence_tweet)
                .expect("evidence tweet in window");
            let context = tweet.hashtags.first().cloned();
            let label: TweetLabel = rules.label(tweet, context.as_deref(), &oracle)?;
            let auto = automation_index(&g.snapshot, &catalog)?;
            let labeled = classify_account(&g.snapshot, &label, &auto, &oracle)?;
            let evidence = EvidenceRecord {
                account_id: id.clone(),
                tweet_id: g.evidence_tweet.clone(),
                label: None,
                rationale: Vec::new(),
                context_hashtag: context,
            };
            let answers = oracle.log.into_inner().expect("log lock");
            Ok((g, labeled, evidence, answers))
        })
        .collect::<Result<_>>()?;

    let mut edges = BTreeSet::new();
    for (i, id) in ids.iter().enumerate() {
        let pool = if kinds[i] == Archetype::Spammer { &spammers } else { &legit };
        let n = rng.random_range(0..=5usize);
        for f in pool.choose_multiple(&mut rng, n) {
            if f != id {
                edges.insert((f.clone(), id.clone()));
            }
        }
    }

    let mut snapshots = Vec::with_capacity(out.len());
    let mut labels = Vec::with_capacity(out.len());
    let mut evidence = Vec::with_capacity(out.len());
    let mut answers = Vec::new();
    for (g, l, e, a) in out {
        snapshots.push(g.snapshot);
        labels.push(l);
        evidence.push(e);
        answers.extend(a);
    }
    Ok(SyntheticCorpus {
        snapshots,
        labels,
        evidence,
        answers,
        catalog,
        dictionary: SpamDictionary::new(SPAM_TERMS)?,
        edges: edges.into_iter().collect(),
    })
}

impl SyntheticCorpus {
    pub fn class_of(&self, account_id: &str) -> Option<AccountClass> {
        self.labels
            .iter()
            .find(|l| l.account_id == account_id)
            .map(|l| l.class)
    }
}
