use super::*;
use crate::evaluate::gen_synthetic_corpus;
use crate::labeling::LabeledAccount;
use crate::learn::{feature_set_preset, train, Algorithm, Dataset, TrainConfig};
use std::path::Path;
use std::sync::OnceLock;

fn entry(id: &str, depth: usize) -> QueueEntry {
    QueueEntry {
        account_id: id.into(),
        provenance: Provenance::Seed,
        depth,
    }
}

fn snapshot(id: &str) -> AccountSnapshot {
    AccountSnapshot {
        account_id: id.into(),
        screen_name: id.into(),
        created_at: 0,
        followers_count: 0,
        friends_count: 0,
        statuses_count: 0,
        listed_count: 0,
        favourites_count: 0,
        recent_tweets: vec![],
        snapshot_at: 0,
    }
}

#[test]
fn provenance_text_round_trips() {
    for p in [
        Provenance::Seed,
        Provenance::FollowerOf("u1".into()),
        Provenance::RetweeterOf("u2".into()),
    ] {
        assert_eq!(p.to_string().parse::<Provenance>().unwrap(), p);
    }
    assert_eq!(Provenance::FollowerOf("x".into()).to_string(), "follower-of:x");
    assert!("friend-of:x".parse::<Provenance>().is_err());
}

#[test]
fn expansion_counts_new_ids() {
    let p = MockEdges::new()
        .with_followers("s", ["a", "b", "c"])
        .with_retweeters("s", ["c", "d"]);
    let mut q = HuntQueue::new(HuntLimits::default());
    q.push_seed("s");
    assert_eq!(expand(&mut q, &p, &snapshot("s"), 0).unwrap(), 4);
    assert_eq!(expand(&mut q, &p, &snapshot("s"), 0).unwrap(), 0);
    q.pop();
    let order: Vec<(String, Provenance, usize)> = std::iter::from_fn(|| q.pop())
        .map(|e| (e.account_id, e.provenance, e.depth))
        .collect();
    assert_eq!(order[0], ("a".into(), Provenance::FollowerOf("s".into()), 1));
    assert_eq!(order[3], ("d".into(), Provenance::RetweeterOf("s".into()), 1));
}

#[test]
fn failed_expansion_leaves_queue_unchanged() {
    let p = MockEdges::new().with_followers("s", ["a"]).failing_for("s");
    let mut q = HuntQueue::new(HuntLimits::default());
    q.push_seed("s");
    assert!(expand(&mut q, &p, &snapshot("s"), 0).is_err());
    assert_eq!((q.len(), q.seen_count()), (1, 1));
}

#[test]
fn queue_limits() {
    let mut q = HuntQueue::new(HuntLimits {
        max_depth: 1,
        max_accounts: 2,
    });
    assert!(q.push_seed("a"));
    assert!(!q.push_seed("a"));
    assert!(!q.enqueue(entry("b", 2)));
    assert!(q.enqueue(entry("b", 1)));
    assert!(!q.enqueue(entry("c", 1)));
    assert_eq!(q.seen_count(), 2);
    let p = MockEdges::new().with_followers("b", ["z"]);
    assert_eq!(expand(&mut q, &p, &snapshot("b"), 1).unwrap(), 0);
}

struct Fixture {
    model: TrainedModel,
    dict: SpamDictionary,
    store: HashMap<String, AccountSnapshot>,
    labels: Vec<LabeledAccount>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let train_corpus = gen_synthetic_corpus(20, 20, 0, 100).unwrap();
        let fv = crate::features::extract_all(
            &train_corpus.snapshots,
            &train_corpus.dictionary,
            &ExtractorConfig::default(),
        )
        .unwrap();
        let names = feature_set_preset("paper-selected").unwrap();
        let (ds, _) = Dataset::join(&fv, &train_corpus.labels, &names).unwrap();
        let model = train(&ds, Algorithm::RandomForest, &TrainConfig::default(), 1).unwrap();
        let c = gen_synthetic_corpus(6, 6, 0, 200).unwrap();
        Fixture {
            model,
            dict: c.dictionary.clone(),
            store: c.snapshots.iter().map(|s| (s.account_id.clone(), s.clone())).collect(),
            labels: c.labels,
        }
    })
}

fn ids(f: &Fixture, spammer: bool) -> Vec<String> {
    f.labels
        .iter()
        .filter(|l| l.class.is_spammer() == spammer)
        .map(|l| l.account_id.clone())
        .collect()
}

/// Refuses edge queries for the given accounts.
struct Guard<'a> {
    inner: MockEdges,
    forbidden: &'a [String],
}

impl SocialEdgeProvider for Guard<'_> {
    fn followers_of(&self, id: &str) -> Result<Vec<String>> {
        assert!(!self.forbidden.iter().any(|f| f == id), "expanded non-spammer {id}");
        self.inner.followers_of(id)
    }

    fn retweeters_of(&self, id: &str, recent: &[crate::domain::TweetRecord]) -> Result<Vec<String>> {
        self.inner.retweeters_of(id, recent)
    }
}

#[test]
fn star_of_spammers() {
    let f = fixture();
    let sp = ids(f, true);
    let legit = ids(f, false);
    let p = Guard {
        inner: MockEdges::new().with_followers(&sp[0], sp[1..].iter().cloned()),
        forbidden: &legit,
    };
    let cls = Classifier {
        model: &f.model,
        dictionary: &f.dict,
        extractor: ExtractorConfig::default(),
    };
    let r = hunt(&sp[..1], &p, &cls, &f.store, HuntLimits::default()).unwrap();
    assert_eq!(r.entries.len(), 6);
    assert_eq!(r.detections().count(), 6);
    assert!(r.entries.iter().all(|e| e.depth <= 1));
}

#[test]
fn legit_neighbors_stop_the_hunt() {
    let f = fixture();
    let sp = ids(f, true);
    let legit = ids(f, false);
    let mut edges = MockEdges::new().with_followers(&sp[0], legit[..5].iter().cloned());
    for l in &legit {
        edges = edges.with_followers(l, sp[1..].iter().cloned());
    }
    let p = Guard {
        inner: edges,
        forbidden: &legit,
    };
    let cls = Classifier {
        model: &f.model,
        dictionary: &f.dict,
        extractor: ExtractorConfig::default(),
    };
    let r = hunt(&sp[..1], &p, &cls, &f.store, HuntLimits::default()).unwrap();
    assert_eq!(r.detections().count(), 1);
    assert_eq!(r.entries.len(), 6);
    assert!(r.entries.iter().all(|e| e.depth <= 1));
}

#[test]
fn missing_snapshots_and_cycles() {
    let f = fixture();
    let sp = ids(f, true);
    let p = MockEdges::new()
        .with_followers(&sp[0], [sp[1].clone(), "ghost".into()])
        .with_followers(&sp[1], [sp[0].clone()]);
    let cls = Classifier {
        model: &f.model,
        dictionary: &f.dict,
        extractor: ExtractorConfig::default(),
    };
    let r = hunt(&sp[..1], &p, &cls, &f.store, HuntLimits::default()).unwrap();
    let seen: Vec<&str> = r.entries.iter().map(|e| e.account_id.as_str()).collect();
    assert_eq!(seen, vec![sp[0].as_str(), sp[1].as_str(), "ghost"]);
    assert_eq!(r.entries[2].verdict, HuntVerdict::Unresolved);
    let mut out = Vec::new();
    write_hunt_csv(&mut out, &r).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("account_id,class,score,provenance,depth\n"));
    assert!(text.contains(&format!("ghost,unresolved,,follower-of:{},1", sp[0])));
}

#[test]
fn account_cap_is_exact() {
    let f = fixture();
    let sp = ids(f, true);
    let p = MockEdges::new().with_followers(&sp[0], sp[1..].iter().cloned());
    let cls = Classifier {
        model: &f.model,
        dictionary: &f.dict,
        extractor: ExtractorConfig::default(),
    };
    let limits = HuntLimits {
        max_depth: 2,
        max_accounts: 3,
    };
    let r = hunt(&sp[..1], &p, &cls, &f.store, limits).unwrap();
    assert_eq!(r.entries.len(), 3);
}

#[test]
fn corpus_edges_from_retweets_and_file() {
    let c = gen_synthetic_corpus(4, 4, 0, 8).unwrap();
    let p = CorpusEdges::new(&c.snapshots, &c.edges);
    let mut any_rt = false;
    for s in &c.snapshots {
        for t in &s.recent_tweets {
            if let Some(orig) = &t.retweeted_author_id {
                if c.snapshots.iter().any(|o| &o.account_id == orig) {
                    any_rt = true;
                    assert!(p.retweeters_of(orig, &[]).unwrap().contains(&s.account_id));
                }
            }
        }
    }
    assert!(any_rt);
    let mut buf = Vec::new();
    write_edges(&mut buf, &c.edges).unwrap();
    assert_eq!(read_edges(buf.as_slice(), Path::new("e")).unwrap(), c.edges);
    assert!(read_edges("a,b\nx,y\n".as_bytes(), Path::new("e")).is_err());
}

