use std::fmt::Write;

use serde::Serialize;

use super::render::{self, BlockCells, CorrectionRow, Sample};
use super::{write, CliError, ReportFormat, RunConfig};
use crate::correctability::{self, Choice, CorrectabilityError, CorrectabilityRecord, PhoneticChannel};
use crate::corpus::{load_corpus, mean_rating, normalize, Severity, TranscriptRecord};
use crate::fit::{integrated_score, kfold_fit, metric_correlation_report, FitError, KFoldResult, RatedScores, WeightFit, Weights};
use crate::phonetic::psim_soundex;
use crate::scorer::{load_score_files, PartialScores, ScoredText, CORRECTED_SUFFIX};

/// Minimum number of rated records for weight fitting.
pub const MIN_RATED: usize = 10;

#[derive(Debug, Default)]
pub struct CommandOutput {
    /// Text for standard output.
    pub stdout: String,
    /// Per-record failures as `(id, message)`; non-empty means exit status 1.
    pub failures: Vec<(String, String)>,
    /// Diagnostics for standard error that do not fail the run.
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct ScoredLine<'a> {
    id: &'a str,
    system_id: &'a str,
    severity: Severity,
    #[serde(flatten)]
    scored: &'a ScoredText,
    integrated: f64,
}

/// `(id, message)` for each record that could not be scored.
type Failures = Vec<(String, String)>;

/// Scores every record. Failing records are reported and skipped.
fn score_corpus(cfg: &RunConfig, records: &[TranscriptRecord]) -> Result<(Vec<Option<ScoredText>>, Failures), CliError> {
    let assembler = cfg.assembler()?;
    let items: Vec<(String, String, String)> = records
        .iter()
        .map(|r| (r.id.clone(), r.reference.clone(), r.hypothesis.clone()))
        .collect();
    let mut failures = Vec::new();
    let scored = assembler
        .assemble_many(&items)
        .into_iter()
        .zip(records)
        .map(|(res, rec)| match res {
            Ok(s) => Some(s),
            Err(e) => {
                failures.push((rec.id.clone(), e.to_string()));
                None
            }
        })
        .collect();
    Ok((scored, failures))
}

/// `score`: per-record score file plus per-system and per-severity summaries.
pub fn score(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let weights = cfg.weights()?;
    let records = load_corpus(&cfg.corpus)?;
    let (scored, failures) = score_corpus(cfg, &records)?;
    cfg.ensure_out()?;

    let mut lines = String::new();
    let mut samples = Vec::new();
    let mut skipped_words = 0;
    for (rec, s) in records.iter().zip(&scored) {
        let Some(s) = s else { continue };
        let integrated = integrated_score(&weights, &s.scores);
        skipped_words += s.soundex_skipped;
        lines.push_str(
            &serde_json::to_string(&ScoredLine {
                id: &rec.id,
                system_id: &rec.system_id,
                severity: rec.severity,
                scored: s,
                integrated,
            })
            .expect("score lines serialize"),
        );
        lines.push('\n');
        samples.push(Sample {
            system: &rec.system_id,
            severity: rec.severity,
            wer: s.scores.wer,
            psim_i: s.psim_phoneme,
            psim_ii: s.scores.s_phon,
            nli: s.scores.s_nli,
            bert: s.scores.s_sem,
            bleurt: s.scores.extras.get("bleurt").copied(),
            heval: s.scores.extras.get("heval").copied(),
            integrated,
        });
    }
    write(&cfg.out.join("scores.jsonl"), &lines)?;

    let (overall, stratified) = render::summary_rows(&samples);
    let summary = match cfg.format {
        ReportFormat::Tsv => {
            let text = render::summary_tsv(&overall, &stratified);
            write(&cfg.out.join("summary.tsv"), &text)?;
            text
        }
        ReportFormat::Json => {
            #[derive(Serialize)]
            struct Summary<'a> {
                weights: Weights,
                by_system: &'a [render::SummaryRow],
                by_severity: &'a [render::SummaryRow],
            }
            let mut text = serde_json::to_string_pretty(&Summary {
                weights,
                by_system: &overall,
                by_severity: &stratified,
            })
            .expect("summary serializes");
            text.push('\n');
            write(&cfg.out.join("summary.json"), &text)?;
            text
        }
    };
    let mut warnings = Vec::new();
    if skipped_words > 0 {
        warnings.push(format!("{skipped_words} word(s) without letters skipped by Soundex"));
    }
    Ok(CommandOutput {
        stdout: summary,
        failures,
        warnings,
    })
}

#[derive(Serialize)]
struct FitReport<'a> {
    n: usize,
    k: usize,
    seed: u64,
    raw_coeffs: &'a [f64],
    intercept: f64,
    normalized: Weights,
    std_errors: &'a [f64],
    p_values: &'a [f64],
    mse: f64,
    shapiro: Option<crate::fit::ShapiroWilk>,
    in_sample_pearson: Option<f64>,
    mean_fold_pearson: Option<f64>,
    folds: Vec<FoldLine<'a>>,
    /// Full final fit, so the report reads back as a [`KFoldResult`].
    #[serde(rename = "final")]
    final_fit: &'a WeightFit,
}

#[derive(Serialize)]
struct FoldLine<'a> {
    fold: usize,
    test_size: usize,
    test_pearson: Option<f64>,
    test_mse: f64,
    train_coeffs: &'a [f64],
    train_intercept: f64,
}

fn rated_rows(records: &[TranscriptRecord], scored: &[Option<ScoredText>]) -> Vec<RatedScores> {
    records
        .iter()
        .zip(scored)
        .filter_map(|(r, s)| {
            s.as_ref().map(|s| RatedScores {
                id: r.id.clone(),
                scores: s.scores.clone(),
                rating: mean_rating(r).ok(),
            })
        })
        .collect()
}

fn correlation_table(rows: &[RatedScores], weights: &Weights) -> Result<String, FitError> {
    let table = metric_correlation_report(rows, weights)?;
    let mut out = String::from("metric\tpearson_r\tp_value\tn\n");
    for row in table {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            row.metric,
            row.r.map(|r| format!("{r:.6}")).unwrap_or_else(|| "NA".into()),
            row.p.map(|p| format!("{p:.6e}")).unwrap_or_else(|| "NA".into()),
            row.n
        )
        .unwrap();
    }
    Ok(out)
}

/// `fit-weights`: k-fold OLS of mean ratings on the three channels.
pub fn fit_weights(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let records = load_corpus(&cfg.corpus)?;
    let rated: Vec<TranscriptRecord> = records
        .into_iter()
        .filter(|r| r.ratings.as_ref().is_some_and(|v| !v.is_empty()))
        .collect();
    if rated.len() < MIN_RATED {
        return Err(CliError::TooFewRatings {
            need: MIN_RATED,
            found: rated.len(),
        });
    }
    let (scored, failures) = score_corpus(cfg, &rated)?;
    let rows = rated_rows(&rated, &scored);
    let features: Vec<[f64; 3]> = rows.iter().map(|r| r.scores.features()).collect();
    let targets: Vec<f64> = rows.iter().map(|r| r.rating.expect("rated")).collect();
    let result: KFoldResult = kfold_fit(&features, &targets, cfg.folds, cfg.seed)?;
    let fit = &result.final_fit;

    let report = FitReport {
        n: rows.len(),
        k: cfg.folds,
        seed: cfg.seed,
        raw_coeffs: &fit.raw_coeffs,
        intercept: fit.intercept,
        normalized: fit.normalized,
        std_errors: &fit.std_errors,
        p_values: &fit.p_values,
        mse: fit.mse,
        shapiro: fit.shapiro,
        in_sample_pearson: result.in_sample_pearson,
        mean_fold_pearson: result.mean_fold_pearson,
        folds: result
            .folds
            .iter()
            .map(|f| FoldLine {
                fold: f.fold_index,
                test_size: f.test_size,
                test_pearson: f.test_pearson,
                test_mse: f.test_mse,
                train_coeffs: &f.train_coeffs,
                train_intercept: f.train_intercept,
            })
            .collect(),
        final_fit: fit,
    };
    cfg.ensure_out()?;
    let mut json = serde_json::to_string_pretty(&report).expect("fit report serializes");
    json.push('\n');
    write(&cfg.out.join("fit_report.json"), &json)?;

    let w = fit.normalized;
    let mut stdout = format!(
        "normalized weights\talpha={:.4}\tbeta={:.4}\tgamma={:.4}\nmse\t{:.6}\n",
        w.alpha, w.beta, w.gamma, fit.mse
    );
    stdout.push_str(&correlation_table(&rows, &w)?);
    Ok(CommandOutput {
        stdout,
        failures,
        warnings: Vec::new(),
    })
}

/// `plot-data`: CSV of each metric's Pearson r against mean ratings.
pub fn plot_data(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let weights = cfg.weights()?;
    let records = load_corpus(&cfg.corpus)?;
    let missing: Vec<String> = records
        .iter()
        .filter(|r| mean_rating(r).is_err())
        .map(|r| r.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::MissingRatings(missing));
    }
    let (scored, failures) = score_corpus(cfg, &records)?;
    let rows = rated_rows(&records, &scored);
    let table = metric_correlation_report(&rows, &weights)?;
    let mut csv = String::from("metric,pearson_r,p_value,n\n");
    for row in &table {
        writeln!(
            csv,
            "{},{},{},{}",
            row.metric,
            row.r.map(|r| format!("{r:.6}")).unwrap_or_else(|| "NA".into()),
            row.p.map(|p| format!("{p:.6e}")).unwrap_or_else(|| "NA".into()),
            row.n
        )
        .unwrap();
    }
    cfg.ensure_out()?;
    write(&cfg.out.join("plot_data.csv"), &csv)?;
    Ok(CommandOutput {
        stdout: csv,
        failures,
        warnings: Vec::new(),
    })
}

#[derive(Clone)]
struct Variant<'a> {
    wer: f64,
    psim_ii: f64,
    scores: Option<&'a PartialScores>,
}

struct Pair<'a> {
    base: Variant<'a>,
    corrected: Variant<'a>,
    selection: &'a CorrectabilityRecord,
    system: &'a str,
}

#[derive(Clone, Copy)]
enum Condition {
    Without,
    WithAll,
    ImprovedOnly,
}

impl<'a> Pair<'a> {
    fn variant(&self, condition: Condition) -> &Variant<'a> {
        match (condition, self.selection.chosen) {
            (Condition::Without, _) | (Condition::ImprovedOnly, Choice::Base) => &self.base,
            (Condition::WithAll, _) | (Condition::ImprovedOnly, Choice::Corrected) => &self.corrected,
        }
    }
}

fn block(variants: &[Variant<'_>]) -> BlockCells {
    let channel = |f: &dyn Fn(&PartialScores) -> Option<f64>| {
        render::mean_opt(variants.iter().map(|v| v.scores.and_then(f)))
    };
    BlockCells {
        wer: render::mean(variants.iter().map(|v| v.wer)),
        psim_ii: render::mean(variants.iter().map(|v| v.psim_ii)),
        bert: channel(&|s| s.s_sem),
        bleurt: channel(&|s| s.extras.get("bleurt").copied()),
        heval: channel(&|s| s.extras.get("heval").copied()),
    }
}

/// `correctability`: three-block WER/metric table (without correction, with
/// correction, oracle-selected) and the correctability-vs-Psim correlation.
///
/// BERT/Bleurt/Heval cells come from score files only: `<id>` entries for the
/// base hypothesis and `<id>#corrected` entries for the correction.
pub fn correctability(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let records = load_corpus(&cfg.corpus)?;
    let lexicon = cfg.lexicon()?;
    let channel = if cfg.psim_phoneme {
        PhoneticChannel::Phoneme(&lexicon)
    } else {
        PhoneticChannel::Soundex
    };
    let selected = correctability::oracle_select_all(&records, channel)?;
    let files = load_score_files(&cfg.scores)?;

    let mut pairs: Vec<Pair<'_>> = Vec::new();
    for (rec, sel) in records.iter().zip(&selected) {
        let reference = normalize(&rec.reference);
        let corrected = rec.corrected_hypothesis.as_deref().expect("checked by oracle_select_all");
        let base = Variant {
            wer: sel.wer_base,
            psim_ii: psim_soundex(&reference, &normalize(&rec.hypothesis)),
            scores: files.get(&rec.id),
        };
        let fixed = Variant {
            wer: sel.wer_corrected,
            psim_ii: psim_soundex(&reference, &normalize(corrected)),
            scores: files.get(&format!("{}{CORRECTED_SUFFIX}", rec.id)),
        };
        pairs.push(Pair {
            base,
            corrected: fixed,
            selection: sel,
            system: &rec.system_id,
        });
    }

    let systems = render::system_order(records.iter().map(|r| r.system_id.as_str()));
    let rows: Vec<CorrectionRow> = systems
        .iter()
        .map(|sys| {
            let group: Vec<&Pair<'_>> = pairs.iter().filter(|p| p.system == sys).collect();
            let pick = |condition: Condition| -> Vec<Variant<'_>> {
                group.iter().map(|p| p.variant(condition).clone()).collect()
            };
            CorrectionRow {
                system: sys.clone(),
                n: group.len(),
                without: block(&pick(Condition::Without)),
                with_all: block(&pick(Condition::WithAll)),
                improved_only: block(&pick(Condition::ImprovedOnly)),
            }
        })
        .collect();

    let mut warnings = Vec::new();
    let correlation = match correctability::correctability_correlation(&selected) {
        Ok(c) => Some(c),
        Err(CorrectabilityError::Fit(e)) => {
            warnings.push(format!("correctability correlation undefined: {e}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let overall = correctability::oracle_corpus_wer(&selected)?;

    cfg.ensure_out()?;
    let stdout = match cfg.format {
        ReportFormat::Tsv => {
            let mut text = render::correction_tsv(&rows);
            writeln!(
                text,
                "\n# all systems\twithout={}\twith={}\timproved_only={}",
                render::pct(overall.without),
                render::pct(overall.with_all),
                render::pct(overall.oracle)
            )
            .unwrap();
            match correlation {
                Some(c) => writeln!(text, "correctability\tr={:.6}\tp={:.6e}\tn={}", c.r, c.p, c.n).unwrap(),
                None => writeln!(text, "correctability\tr=NA\tp=NA\tn={}", selected.len()).unwrap(),
            }
            write(&cfg.out.join("correctability.tsv"), &text)?;
            text
        }
        ReportFormat::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                systems: &'a [CorrectionRow],
                overall: correctability::OracleWer,
                correlation: Option<correctability::Correlation>,
                records: &'a [CorrectabilityRecord],
            }
            let mut text = serde_json::to_string_pretty(&Report {
                systems: &rows,
                overall,
                correlation,
                records: &selected,
            })
            .expect("report serializes");
            text.push('\n');
            write(&cfg.out.join("correctability.json"), &text)?;
            text
        }
    };
    Ok(CommandOutput {
        stdout,
        failures: Vec::new(),
        warnings,
    })
}
