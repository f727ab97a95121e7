use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use asr_intelligibility::cli::{self, CliError, CommandOutput, ReportFormat, RunConfig, WeightSource};

#[derive(Parser)]
#[command(name = "asr-intel", version, about = "Intelligibility-oriented ASR transcript evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every record and summarize per system and per severity.
    Score(Common),
    /// Fit integrated-metric weights to mean human ratings.
    FitWeights(Common),
    /// Compare base and LLM-corrected hypotheses.
    Correctability(Common),
    /// Emit per-metric correlations with ratings as CSV.
    PlotData(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    corpus: PathBuf,
    /// Score file (JSONL); repeatable, later files override earlier ones.
    #[arg(long = "scores")]
    scores: Vec<PathBuf>,
    #[arg(long, env = "SCORER_ENDPOINT")]
    endpoint: Option<String>,
    /// CMU-format lexicon; defaults to the bundled one.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Literal weights `alpha,beta,gamma`.
    #[arg(long, conflicts_with = "fit_report")]
    weights: Option<String>,
    /// Take normalized weights from a `fit-weights` report.
    #[arg(long)]
    fit_report: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Bound on concurrent scorer-service requests.
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
    /// Correlate correctability with Psim I instead of Psim II.
    #[arg(long)]
    psim_phoneme: bool,
}

impl Common {
    fn config(self) -> Result<RunConfig, CliError> {
        let weights = match (self.weights, self.fit_report) {
            (Some(text), None) => Some(WeightSource::parse_literal(&text)?),
            (None, Some(path)) => Some(WeightSource::FitReport(path)),
            _ => None,
        };
        Ok(RunConfig {
            corpus: self.corpus,
            scores: self.scores,
            endpoint: self.endpoint,
            lexicon: self.lexicon,
            weights,
            seed: self.seed,
            folds: self.folds,
            out: self.out,
            format: match self.format {
                Format::Tsv => ReportFormat::Tsv,
                Format::Json => ReportFormat::Json,
            },
            concurrency: self.concurrency,
            psim_phoneme: self.psim_phoneme,
        })
    }
}

fn run(command: Command) -> Result<CommandOutput, CliError> {
    match command {
        Command::Score(c) => cli::score(&c.config()?),
        Command::FitWeights(c) => cli::fit_weights(&c.config()?),
        Command::Correctability(c) => cli::correctability(&c.config()?),
        Command::PlotData(c) => cli::plot_data(&c.config()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(output) => {
            print!("{}", output.stdout);
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            for (id, msg) in &output.failures {
                eprintln!("failed: {id}: {msg}");
            }
            if output.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
