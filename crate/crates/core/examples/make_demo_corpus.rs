// Regenerates the bundled demo corpus under `data/demo/`.
//
// Three fake ASR systems transcribe voice commands from speakers in four
// severity groups. Hypotheses are corrupted references, the NLI and semantic
// channels are simulated, and six annotators rate each pair from a blend of
// all three channels plus rater noise, so no single channel explains the
// ratings on its own.
//
// ```text
// cargo run --example make_demo_corpus            # writes data/demo/
// cargo run --example make_demo_corpus -- /tmp/x  # writes elsewhere
// ```

use std::collections::BTreeMap;
use std::error::Error;
use std::path::{Path, PathBuf};

use asr_intelligibility::align::wer_text;
use asr_intelligibility::corpus::write_corpus;
use asr_intelligibility::phonetic::psim_soundex;
use asr_intelligibility::scorer::PartialScores;
use asr_intelligibility::{normalize, Severity, TranscriptRecord};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

pub const SEED: u64 = 1005;
const ANNOTATORS: usize = 6;
const PER_CELL: usize = 5;

const SYSTEMS: [(&str, f64); 3] = [("alpha-ctc", 1.0), ("beta-rnnt", 0.75), ("gamma-s2s", 1.3)];
const SEVERITIES: [(Severity, f64); 4] = [
    (Severity::High, 0.06),
    (Severity::Medium, 0.16),
    (Severity::Low, 0.30),
    (Severity::VeryLow, 0.45),
];

const SENTENCES: [&str; 15] = [
    "SET THE AIR CONDITIONING TO SEVENTY EIGHT",
    "CALL MY DAUGHTER",
    "TURN OFF THE KITCHEN LIGHTS",
    "PLAY SOME MUSIC",
    "WHAT IS THE WEATHER TODAY",
    "SET A TIMER FOR TEN MINUTES",
    "REMIND ME TO CALL ROBERT TOMORROW",
    "OPEN THE GARAGE DOOR",
    "TURN ON THE LIGHTS IN THE KITCHEN",
    "STOP THE MUSIC",
    "SET AN ALARM FOR SEVEN",
    "DON'T FORGET TO WATER THE PLANTS",
    "THE PROJECT DEADLINE IS NOT FLEXIBLE",
    "THE CAT RUNS TO THE GYM",
    "PLAY FIVE MINUTES OF RAIN",
];

/// Near-homophones used for phonetically plausible substitutions.
const NEIGHBOURS: [(&str, &str); 20] = [
    ("SET", "SAT"),
    ("AIR", "ERR"),
    ("CONDITIONING", "CONDITION"),
    ("SEVENTY", "SEVENTEEN"),
    ("EIGHT", "ATE"),
    ("CALL", "CALM"),
    ("DAUGHTER", "DOCTOR"),
    ("TURN", "TERM"),
    ("LIGHTS", "LIKES"),
    ("MUSIC", "MUSE"),
    ("WEATHER", "WETTER"),
    ("TIMER", "TIME"),
    ("TEN", "DEN"),
    ("ROBERT", "RUPERT"),
    ("TOMORROW", "TO MORROW"),
    ("CAT", "BAT"),
    ("SEVEN", "HEAVEN"),
    ("WATER", "WADER"),
    ("KITCHEN", "CHICKEN"),
    ("FIVE", "HIVE"),
];

const UNRELATED: [&str; 12] = [
    "BANANA", "PURPLE", "WINDOW", "GULAMNBA", "TRAIN", "HELLO", "NOTHING", "BOX", "QUIET", "RIVER", "PENCIL", "MOON",
];

pub struct DemoData {
    pub corpus: String,
    pub scores: String,
    pub extras: String,
}

#[derive(Serialize)]
struct ScoreLine<'a> {
    id: &'a str,
    #[serde(flatten)]
    scores: &'a PartialScores,
}

fn neighbour(word: &str) -> Option<&'static str> {
    NEIGHBOURS.iter().find(|(w, _)| *w == word).map(|(_, n)| *n)
}

/// How a hypothesis token came about, so the simulated corrector can treat
/// phonetic slips differently from unrelated words.
#[derive(Clone, Copy)]
enum Token {
    Kept(&'static str),
    Neighbour(&'static str, &'static str),
    Unrelated(&'static str, &'static str),
    Fragment(&'static str),
}

impl Token {
    fn text(self) -> String {
        match self {
            Token::Kept(w) => w.to_string(),
            Token::Neighbour(_, n) | Token::Unrelated(_, n) => n.to_string(),
            Token::Fragment(w) => w[..(w.len() / 2).max(1)].to_string(),
        }
    }
}

fn render(tokens: &[Token]) -> String {
    if tokens.is_empty() {
        return "UH".into();
    }
    tokens.iter().map(|t| t.text()).collect::<Vec<_>>().join(" ")
}

fn unrelated(rng: &mut ChaCha8Rng) -> &'static str {
    UNRELATED[rng.random_range(0..UNRELATED.len())]
}

/// Corrupts each word independently with probability `rate`.
fn corrupt(reference: &'static str, rate: f64, rng: &mut ChaCha8Rng) -> Vec<Token> {
    let mut out = Vec::new();
    for word in reference.split_whitespace() {
        if !rng.random_bool(rate.min(0.95)) {
            out.push(Token::Kept(word));
            continue;
        }
        match rng.random_range(0..5) {
            0 => {}
            1 => {
                out.push(Token::Fragment(word));
                out.push(Token::Kept(word));
            }
            2 => out.push(Token::Unrelated(word, unrelated(rng))),
            _ => match neighbour(word) {
                Some(n) => out.push(Token::Neighbour(word, n)),
                None => out.push(Token::Unrelated(word, unrelated(rng))),
            },
        }
    }
    out
}

/// A simulated LLM correction: phonetic slips and stutters are usually
/// repaired, unrelated words rarely, and correct words are occasionally
/// rewritten.
fn correct(tokens: &[Token], rng: &mut ChaCha8Rng) -> String {
    let mut out = Vec::new();
    for &token in tokens {
        match token {
            Token::Kept(w) if rng.random_bool(0.04) => out.push(Token::Unrelated(w, unrelated(rng))),
            Token::Neighbour(w, _) if rng.random_bool(0.75) => out.push(Token::Kept(w)),
            Token::Unrelated(w, _) if rng.random_bool(0.15) => out.push(Token::Kept(w)),
            Token::Fragment(_) if rng.random_bool(0.7) => {}
            other => out.push(other),
        }
    }
    render(&out)
}

fn simulate_channels(quality: f64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let nli_noise = Normal::new(0.0, 0.16).expect("valid sigma");
    let sem_noise = Normal::new(0.0, 0.22).expect("valid sigma");
    let nli = (0.25 + 0.65 * quality + nli_noise.sample(rng)).clamp(0.0, 1.0);
    let sem = (-0.2 + 1.0 * quality + sem_noise.sample(rng)).clamp(-1.0, 1.0);
    (round4(nli), round4(sem))
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn quality(reference: &str, hypothesis: &str) -> f64 {
    let wer = wer_text(reference, hypothesis).expect("references are non-empty").wer;
    1.0 - wer.min(1.0)
}

pub fn generate(seed: u64) -> Result<DemoData, Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rater = Normal::new(0.0, 0.35)?;
    let mut records = Vec::new();
    let mut scores = String::new();
    let mut extras = String::new();

    let mut sentence = 0;
    for (system, system_factor) in SYSTEMS {
        for (severity, rate) in SEVERITIES {
            for _ in 0..PER_CELL {
                let reference = SENTENCES[sentence % SENTENCES.len()];
                sentence += 1;
                let id = format!("{system}-{}-{:03}", severity.label().unwrap_or("U"), records.len() + 1);
                let tokens = corrupt(reference, rate * system_factor, &mut rng);
                let hypothesis = render(&tokens);
                let corrected = correct(&tokens, &mut rng);

                let (nli, sem) = simulate_channels(quality(reference, &hypothesis), &mut rng);
                let phon = psim_soundex(&normalize(reference), &normalize(&hypothesis));
                let blend = (0.40 * nli + 0.28 * sem + 0.32 * phon).clamp(0.0, 1.0);
                let ratings = (0..ANNOTATORS)
                    .map(|_| (1.0 + 4.0 * blend + rater.sample(&mut rng)).round().clamp(1.0, 5.0) as i64)
                    .collect();

                let (c_nli, c_sem) = simulate_channels(quality(reference, &corrected), &mut rng);
                for (line_id, nli, sem) in [(id.clone(), nli, sem), (format!("{id}#corrected"), c_nli, c_sem)] {
                    let partial = PartialScores {
                        s_nli: Some(nli),
                        s_sem: Some(sem),
                        extras: BTreeMap::new(),
                    };
                    scores.push_str(&serde_json::to_string(&ScoreLine { id: &line_id, scores: &partial })?);
                    scores.push('\n');

                    let bleurt = round4((-1.1 + 1.6 * (0.6 * nli + 0.4 * sem.max(0.0))).clamp(-1.5, 1.0));
                    let heval = round4((0.5 * nli + 0.5 * (sem + 1.0) / 2.0).clamp(0.0, 1.0));
                    let partial = PartialScores {
                        s_nli: None,
                        s_sem: None,
                        extras: BTreeMap::from([("bleurt".to_string(), bleurt), ("heval".to_string(), heval)]),
                    };
                    extras.push_str(&serde_json::to_string(&ScoreLine { id: &line_id, scores: &partial })?);
                    extras.push('\n');
                }

                records.push(TranscriptRecord {
                    id,
                    system_id: system.to_string(),
                    severity,
                    reference: reference.to_string(),
                    hypothesis,
                    corrected_hypothesis: Some(corrected),
                    ratings: Some(ratings),
                });
            }
        }
    }

    let mut corpus = Vec::new();
    write_corpus(&records, &mut corpus)?;
    Ok(DemoData {
        corpus: String::from_utf8(corpus)?,
        scores,
        extras,
    })
}

pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo")
}

/// Checks that the bundled files are exactly what the generator produces.
pub fn run_example() -> Result<(), Box<dyn Error>> {
    let data = generate(SEED)?;
    let dir = bundled_dir();
    for (name, text) in [("corpus.jsonl", &data.corpus), ("scores.jsonl", &data.scores), ("extras.jsonl", &data.extras)] {
        let bundled = std::fs::read_to_string(dir.join(name))?;
        if &bundled != text {
            return Err(format!("data/demo/{name} is stale; rerun `cargo run --example make_demo_corpus`").into());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(bundled_dir);
    std::fs::create_dir_all(&dir)?;
    let data = generate(SEED)?;
    std::fs::write(dir.join("corpus.jsonl"), &data.corpus)?;
    std::fs::write(dir.join("scores.jsonl"), &data.scores)?;
    std::fs::write(dir.join("extras.jsonl"), &data.extras)?;
    println!("wrote {} records to {}", data.corpus.lines().count(), dir.display());
    Ok(())
}
