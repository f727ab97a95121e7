#![allow(dead_code)]

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use asr_intelligibility::cli::{ReportFormat, RunConfig, WeightSource};
use serde_json::Value;

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn demo(name: &str) -> PathBuf {
    manifest_dir().join("data/demo").join(name)
}

pub fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("tests/fixtures").join(name)
}

/// Inputs and expected values produced by `tests/oracles/reference_values.py`.
pub fn reference_values() -> Value {
    let text = fs::read_to_string(fixture("reference_values.json")).expect("reference fixture present");
    serde_json::from_str(&text).expect("reference fixture parses")
}

pub fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_f64().expect("number"))
        .collect()
}

pub fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array().expect("array").iter().map(floats).collect()
}

pub fn rel_close(got: f64, want: f64, rel: f64) -> bool {
    if want == 0.0 {
        return got.abs() <= rel;
    }
    ((got - want) / want).abs() <= rel
}

/// Demo-corpus run configuration with both bundled score files.
pub fn demo_config(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(demo("corpus.jsonl"), out);
    cfg.scores = vec![demo("scores.jsonl"), demo("extras.jsonl")];
    cfg.seed = 13;
    cfg
}

pub fn with_weights(mut cfg: RunConfig, weights: &str) -> RunConfig {
    cfg.weights = Some(WeightSource::parse_literal(weights).expect("literal weights"));
    cfg
}

pub fn json(mut cfg: RunConfig) -> RunConfig {
    cfg.format = ReportFormat::Json;
    cfg
}

/// Every file in `dir`, keyed by file name.
pub fn snapshot(dir: &Path) -> HashMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .expect("output dir exists")
        .map(|e| {
            let e = e.expect("dir entry");
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).expect("readable"))
        })
        .collect()
}
