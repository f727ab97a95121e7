// Fetches NLI and semantic scores from the scorer service, with a
// write-through cache so repeated pairs never reach the service twice.
//
// Set `SCORER_ENDPOINT` to use a running service. Without it, the example
// starts a canned local responder so it still runs offline.

use std::error::Error;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread;

use asr_intelligibility::phonetic::Lexicon;
use asr_intelligibility::scorer::remote::ENDPOINT_ENV;
use asr_intelligibility::scorer::{Assembler, RemoteConfig, RemoteScorer, ScoreCache, ScoreMap};

/// Answers every request with a fixed body for its route.
fn canned_service() -> Result<String, Box<dyn Error>> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let url = format!("http://{}", listener.local_addr()?);
    thread::spawn(move || {
        for stream in listener.incoming().flatten() {
            let mut reader = BufReader::new(&stream);
            let mut request_line = String::new();
            let mut length = 0;
            let _ = reader.read_line(&mut request_line);
            loop {
                let mut header = String::new();
                if reader.read_line(&mut header).unwrap_or(0) == 0 || header.trim().is_empty() {
                    break;
                }
                if let Some(v) = header.to_ascii_lowercase().strip_prefix("content-length:") {
                    length = v.trim().parse().unwrap_or(0);
                }
            }
            let _ = reader.read_exact(&mut vec![0; length]);
            let body = match request_line.split_whitespace().nth(1) {
                Some("/health") => r#"{"status":"ok","model_versions":{"nli":"canned","semantic":"canned"}}"#,
                Some("/nli") => r#"{"entail":0.8,"contradict":0.05,"neutral":0.15}"#,
                Some("/semantic") => r#"{"f1":0.62,"precision":0.6,"recall":0.64}"#,
                _ => "{}",
            };
            let _ = write!(
                &stream,
                "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    Ok(url)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let endpoint = match std::env::var(ENDPOINT_ENV) {
        Ok(url) => url,
        Err(_) => canned_service()?,
    };
    let remote = RemoteScorer::connect(RemoteConfig::new(&endpoint))?;
    println!("scorer at {} reports version {}", remote.endpoint(), remote.version());

    let dir = tempfile::tempdir()?;
    let cache_path = dir.path().join("scorer_cache.jsonl");
    let assembler = Assembler::new(ScoreMap::new(), Lexicon::bundled())
        .with_remote(remote, ScoreCache::open(&cache_path)?)
        .with_concurrency(2);

    let items: Vec<(String, String, String)> = [
        ("u1", "TURN OFF THE KITCHEN LIGHTS", "TURN OFF THE CHICKEN LIGHTS"),
        ("u2", "CALL ROBERT TOMORROW", "CALL RUPERT TOMORROW"),
        ("u3", "Turn off the kitchen lights.", "turn off the chicken lights"),
    ]
    .iter()
    .map(|(id, r, h)| (id.to_string(), r.to_string(), h.to_string()))
    .collect();
    for (item, result) in items.iter().zip(assembler.assemble_many(&items)) {
        let scored = result?;
        println!(
            "{}: NLI {:.3} ({:?}), BERT {:.3}, PsimII {:.3}",
            item.0, scored.scores.s_nli, scored.provenance.s_nli, scored.scores.s_sem, scored.scores.s_phon
        );
    }
    // u3 normalizes to the same pair as u1, so it may be served from the cache.
    let cached = std::fs::read_to_string(&cache_path)?.lines().count();
    println!("{cached} cache entries written to {}", cache_path.display());
    assert!((2..=3).contains(&cached));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
