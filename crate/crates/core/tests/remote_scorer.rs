//! Scorer-service client against an in-process HTTP stub.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use asr_intelligibility::phonetic::Lexicon;
use asr_intelligibility::scorer::{
    cache_key, Assembler, PartialScores, RemoteConfig, RemoteScorer, ScoreCache, ScoreMap, ScorerError, Source,
};
use serde_json::{json, Value};

struct Request {
    method: String,
    path: String,
    body: Value,
}

type Handler = dyn Fn(&Request) -> (u16, String) + Send + Sync;

struct Stub {
    url: String,
    hits: Arc<AtomicUsize>,
    log: Arc<Mutex<Vec<(String, String)>>>,
}

impl Stub {
    fn start(handler: impl Fn(&Request) -> (u16, String) + Send + Sync + 'static) -> Stub {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}", listener.local_addr().unwrap());
        let hits = Arc::new(AtomicUsize::new(0));
        let log = Arc::new(Mutex::new(Vec::new()));
        let handler: Arc<Handler> = Arc::new(handler);
        {
            let (hits, log) = (hits.clone(), log.clone());
            thread::spawn(move || {
                for stream in listener.incoming().flatten() {
                    let (hits, log, handler) = (hits.clone(), log.clone(), handler.clone());
                    thread::spawn(move || serve(stream, &*handler, &hits, &log));
                }
            });
        }
        Stub { url, hits, log }
    }

    fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }

    fn config(&self) -> RemoteConfig {
        let mut config = RemoteConfig::new(&self.url);
        config.backoff_base = Duration::from_millis(2);
        config.timeout = Duration::from_secs(5);
        config
    }
}

fn serve(stream: TcpStream, handler: &Handler, hits: &AtomicUsize, log: &Mutex<Vec<(String, String)>>) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut line = String::new();
    if reader.read_line(&mut line).unwrap_or(0) == 0 {
        return;
    }
    let mut parts = line.split_whitespace();
    let method = parts.next().unwrap_or_default().to_string();
    let path = parts.next().unwrap_or_default().to_string();
    let mut length = 0;
    loop {
        let mut header = String::new();
        reader.read_line(&mut header).unwrap();
        let header = header.trim_end();
        if header.is_empty() {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                length = value.trim().parse().unwrap();
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body).unwrap();
    let body: Value = serde_json::from_slice(&body).unwrap_or(Value::Null);

    hits.fetch_add(1, Ordering::SeqCst);
    log.lock().unwrap().push((method.clone(), path.clone()));
    let (status, text) = handler(&Request { method, path, body });
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{text}",
        text.len()
    )
    .unwrap();
}

/// Entailment is 0.9 for premises starting with OPEN and 0.5 otherwise; F1 is
/// the candidate length over 100.
fn healthy(req: &Request) -> (u16, String) {
    match (req.method.as_str(), req.path.as_str()) {
        ("GET", "/health") => (
            200,
            json!({"status": "ok", "model_versions": {"nli": "roberta-large-mnli", "semantic": "bertscore-deberta"}})
                .to_string(),
        ),
        ("POST", "/nli") => {
            let premise = req.body["premise"].as_str().unwrap();
            let entail = if premise.starts_with("OPEN") { 0.9 } else { 0.5 };
            (200, json!({"entail": entail, "contradict": 0.1, "neutral": 0.9 - entail}).to_string())
        }
        ("POST", "/semantic") => {
            let candidate = req.body["candidate"].as_str().unwrap();
            let f1 = candidate.len() as f64 / 100.0;
            (200, json!({"f1": f1, "precision": f1, "recall": f1}).to_string())
        }
        _ => (404, "{}".into()),
    }
}

#[test]
fn connect_reads_model_versions() {
    let stub = Stub::start(healthy);
    let scorer = RemoteScorer::connect(stub.config()).unwrap();
    assert_eq!(scorer.version(), "nli=roberta-large-mnli;semantic=bertscore-deberta");
    assert_eq!(stub.log.lock().unwrap().as_slice(), [("GET".to_string(), "/health".to_string())]);
}

#[test]
fn fetch_queries_both_nli_directions_and_semantic() {
    let stub = Stub::start(healthy);
    let scorer = RemoteScorer::connect(stub.config()).unwrap();
    let scores = scorer.fetch("OPEN DUOLINGO", "GULAMNBA").unwrap();
    assert_eq!(scores.nli_forward.entail, 0.9);
    assert_eq!(scores.nli_backward.entail, 0.5);
    assert_eq!(scores.s_sem, 0.08);
    let paths: Vec<String> = stub.log.lock().unwrap().iter().map(|(_, p)| p.clone()).collect();
    assert_eq!(paths, ["/health", "/nli", "/nli", "/semantic"]);
}

#[test]
fn assembler_fills_missing_channels_remotely() {
    let stub = Stub::start(healthy);
    let remote = RemoteScorer::connect(stub.config()).unwrap();
    let mut files = ScoreMap::new();
    files.insert(
        "u2".into(),
        PartialScores {
            s_sem: Some(-0.25),
            ..Default::default()
        },
    );
    let assembler = Assembler::new(files, Lexicon::bundled()).with_remote(remote, ScoreCache::ephemeral());

    let u1 = assembler.assemble_text("u1", "OPEN DUOLINGO", "GO GULAMNBA").unwrap();
    assert!((u1.scores.s_nli - 0.7).abs() < 1e-12);
    assert_eq!(u1.scores.s_sem, 0.11);
    assert_eq!(u1.provenance.s_nli, Source::Remote);
    assert_eq!(u1.provenance.s_phon, Source::Local);
    assert_eq!(
        u1.provenance.scorer_version.as_deref(),
        Some("nli=roberta-large-mnli;semantic=bertscore-deberta")
    );

    let u2 = assembler.assemble_text("u2", "CALL MOM", "CALL MOM").unwrap();
    assert_eq!(u2.scores.s_sem, -0.25);
    assert_eq!(u2.provenance.s_sem, Source::File);
    assert_eq!(u2.provenance.s_nli, Source::Remote);
}

#[test]
fn malformed_body_is_a_protocol_error_without_retry() {
    let stub = Stub::start(|req| match req.path.as_str() {
        "/nli" => (200, r#"{"entail": "high"}"#.into()),
        _ => healthy(req),
    });
    let scorer = RemoteScorer::new(stub.config(), "v1");
    assert!(matches!(scorer.fetch("A", "B"), Err(ScorerError::Protocol(_))));
    assert_eq!(stub.hits(), 1);
}

#[test]
fn probabilities_that_do_not_sum_to_one_are_rejected() {
    let stub = Stub::start(|req| match req.path.as_str() {
        "/nli" => (200, json!({"entail": 0.7, "contradict": 0.7, "neutral": 0.1}).to_string()),
        _ => healthy(req),
    });
    let scorer = RemoteScorer::new(stub.config(), "v1");
    assert!(matches!(scorer.fetch("A", "B"), Err(ScorerError::Protocol(_))));
    assert_eq!(stub.hits(), 1);
}

#[test]
fn client_errors_are_not_retried() {
    let stub = Stub::start(|_| (422, r#"{"detail":"bad input"}"#.into()));
    let scorer = RemoteScorer::new(stub.config(), "v1");
    match scorer.fetch("A", "B") {
        Err(ScorerError::Protocol(msg)) => assert!(msg.contains("422"), "{msg}"),
        other => panic!("expected protocol error, got {other:?}"),
    }
    assert_eq!(stub.hits(), 1);
}

#[test]
fn server_errors_are_retried_until_success() {
    let failures = Arc::new(AtomicUsize::new(0));
    let stub = Stub::start({
        let failures = failures.clone();
        move |req| {
            if req.path == "/semantic" && failures.fetch_add(1, Ordering::SeqCst) < 2 {
                (503, "{}".into())
            } else {
                healthy(req)
            }
        }
    });
    let scorer = RemoteScorer::new(stub.config(), "v1");
    let scores = scorer.fetch("OPEN X", "Y").unwrap();
    assert_eq!(scores.s_sem, 0.01);
    assert_eq!(stub.hits(), 2 + 3);
}

#[test]
fn persistent_server_errors_exhaust_attempts() {
    let stub = Stub::start(|_| (500, "{}".into()));
    let scorer = RemoteScorer::new(stub.config(), "v1");
    match scorer.fetch("A", "B") {
        Err(ScorerError::Transport { attempts, .. }) => assert_eq!(attempts, 3),
        other => panic!("expected transport error, got {other:?}"),
    }
    assert_eq!(stub.hits(), 3);
}

#[test]
fn cache_is_written_through_and_reused() {
    let stub = Stub::start(healthy);
    let dir = tempfile::tempdir().unwrap();
    let cache_path = dir.path().join("cache.jsonl");

    let first = {
        let remote = RemoteScorer::connect(stub.config()).unwrap();
        let cache = ScoreCache::open(&cache_path).unwrap();
        let assembler = Assembler::new(ScoreMap::new(), Lexicon::bundled()).with_remote(remote, cache);
        assembler.assemble_text("u1", "OPEN THE DOOR", "OPEN THE DOOR").unwrap()
    };
    assert_eq!(first.provenance.s_nli, Source::Remote);
    let after_first = stub.hits();
    assert_eq!(std::fs::read_to_string(&cache_path).unwrap().lines().count(), 1);

    let remote = RemoteScorer::connect(stub.config()).unwrap();
    let version = remote.version().to_string();
    let cache = ScoreCache::open(&cache_path).unwrap();
    assert!(cache.get(&cache_key("OPEN THE DOOR", "OPEN THE DOOR", &version)).is_some());
    let assembler = Assembler::new(ScoreMap::new(), Lexicon::bundled()).with_remote(remote, cache);
    let second = assembler.assemble_text("u1", "open the door", "Open the door.").unwrap();
    assert_eq!(second.provenance.s_nli, Source::Cache);
    assert_eq!(second.scores.s_nli, first.scores.s_nli);
    // Only the second /health call reached the stub.
    assert_eq!(stub.hits(), after_first + 1);
}

#[test]
fn concurrent_assembly_preserves_input_order() {
    let in_flight = Arc::new(AtomicUsize::new(0));
    let peak = Arc::new(AtomicUsize::new(0));
    let stub = Stub::start({
        let (in_flight, peak) = (in_flight.clone(), peak.clone());
        move |req| {
            let now = in_flight.fetch_add(1, Ordering::SeqCst) + 1;
            peak.fetch_max(now, Ordering::SeqCst);
            // Later items answer faster, so completion order is reversed.
            let n = req.body["candidate"].as_str().or(req.body["hypothesis"].as_str()).unwrap_or("");
            let delay = 30u64.saturating_sub(n.len() as u64);
            thread::sleep(Duration::from_millis(delay));
            in_flight.fetch_sub(1, Ordering::SeqCst);
            healthy(req)
        }
    });
    let remote = RemoteScorer::new(stub.config(), "v1");
    let assembler = Assembler::new(ScoreMap::new(), Lexicon::bundled())
        .with_remote(remote, ScoreCache::ephemeral())
        .with_concurrency(4);
    let items: Vec<(String, String, String)> = (1..=12)
        .map(|i| (format!("u{i}"), "OPEN IT".to_string(), "X".repeat(i)))
        .collect();
    let results = assembler.assemble_many(&items);
    let sems: Vec<f64> = results.iter().map(|r| r.as_ref().unwrap().scores.s_sem).collect();
    let want: Vec<f64> = (1..=12).map(|i| i as f64 / 100.0).collect();
    assert_eq!(sems, want);
    let peak = peak.load(Ordering::SeqCst);
    assert!((2..=4).contains(&peak), "peak concurrency {peak}");
}

#[test]
fn missing_channel_without_endpoint() {
    let mut files = HashMap::new();
    files.insert(
        "u1".to_string(),
        PartialScores {
            s_nli: Some(0.5),
            ..Default::default()
        },
    );
    let assembler = Assembler::new(files, Lexicon::bundled());
    match assembler.assemble_text("u1", "A", "A") {
        Err(ScorerError::MissingChannel { id, channel }) => assert_eq!((id.as_str(), channel), ("u1", "s_sem")),
        other => panic!("expected missing channel, got {other:?}"),
    }
}
