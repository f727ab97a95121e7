// Runs the four batch commands behind `asr-intel` on the demo corpus:
// score, fit-weights, plot-data (using the fitted weights) and
// correctability.
//
// ```text
// cargo run --example cli_pipeline -- out/demo
// ```

use std::error::Error;
use std::path::{Path, PathBuf};

use asr_intelligibility::cli::{self, RunConfig, WeightSource};

fn pipeline(out: &Path) -> Result<(), Box<dyn Error>> {
    let demo = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let mut cfg = RunConfig::new(demo.join("corpus.jsonl"), out);
    cfg.scores = vec![demo.join("scores.jsonl"), demo.join("extras.jsonl")];
    cfg.seed = 7;

    let fit = cli::fit_weights(&cfg)?;
    println!("{}", fit.stdout);

    cfg.weights = Some(WeightSource::FitReport(out.join("fit_report.json")));
    let summary = cli::score(&cfg)?;
    println!("{}", summary.stdout);
    let plot = cli::plot_data(&cfg)?;
    println!("{}", plot.stdout);
    let table = cli::correctability(&cfg)?;
    println!("{}", table.stdout);
    for warning in [fit.warnings, summary.warnings, plot.warnings, table.warnings].concat() {
        eprintln!("warning: {warning}");
    }

    for file in ["scores.jsonl", "summary.tsv", "fit_report.json", "plot_data.csv", "correctability.tsv"] {
        if !out.join(file).is_file() {
            return Err(format!("{file} was not written").into());
        }
    }
    println!("reports written to {}", out.display());
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    pipeline(dir.path())
}

fn main() -> Result<(), Box<dyn Error>> {
    match std::env::args().nth(1) {
        Some(out) => pipeline(&PathBuf::from(out)),
        None => run_example(),
    }
}
