//! Table rendering. WER is a ratio everywhere except in TSV, where it is
//! shown as a percentage.

use std::fmt::Write;

use serde::Serialize;

use crate::corpus::Severity;

/// Channel means over a group of scored records.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub severity: Option<&'static str>,
    pub system: String,
    pub n: usize,
    pub wer: f64,
    pub psim_i: f64,
    pub psim_ii: f64,
    pub nli: f64,
    pub bert: f64,
    pub bleurt: Option<f64>,
    pub heval: Option<f64>,
    pub integrated: f64,
}

pub struct Sample<'a> {
    pub system: &'a str,
    pub severity: Severity,
    pub wer: f64,
    pub psim_i: f64,
    pub psim_ii: f64,
    pub nli: f64,
    pub bert: f64,
    pub bleurt: Option<f64>,
    pub heval: Option<f64>,
    pub integrated: f64,
}

pub fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

/// Mean of an optional channel; `None` unless every sample has it.
pub fn mean_opt(xs: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let all: Option<Vec<f64>> = xs.collect();
    all.filter(|v| !v.is_empty()).map(|v| mean(v.into_iter()))
}

/// Systems in order of first appearance.
pub fn system_order<'a>(systems: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for s in systems {
        if !seen.iter().any(|x| x == s) {
            seen.push(s.to_string());
        }
    }
    seen
}

fn summarize(severity: Option<&'static str>, system: &str, group: &[&Sample<'_>]) -> SummaryRow {
    SummaryRow {
        severity,
        system: system.to_string(),
        n: group.len(),
        wer: mean(group.iter().map(|s| s.wer)),
        psim_i: mean(group.iter().map(|s| s.psim_i)),
        psim_ii: mean(group.iter().map(|s| s.psim_ii)),
        nli: mean(group.iter().map(|s| s.nli)),
        bert: mean(group.iter().map(|s| s.bert)),
        bleurt: mean_opt(group.iter().map(|s| s.bleurt)),
        heval: mean_opt(group.iter().map(|s| s.heval)),
        integrated: mean(group.iter().map(|s| s.integrated)),
    }
}

/// Per-system rows, then per-severity rows in H, M, L, VL order. Records of
/// unknown severity only count towards the per-system rows.
pub fn summary_rows(samples: &[Sample<'_>]) -> (Vec<SummaryRow>, Vec<SummaryRow>) {
    let systems = system_order(samples.iter().map(|s| s.system));
    let overall = systems
        .iter()
        .map(|sys| {
            let group: Vec<&Sample<'_>> = samples.iter().filter(|s| s.system == sys).collect();
            summarize(None, sys, &group)
        })
        .collect();
    let mut stratified = Vec::new();
    for severity in Severity::LABELLED {
        for sys in &systems {
            let group: Vec<&Sample<'_>> = samples
                .iter()
                .filter(|s| s.system == sys && s.severity == severity)
                .collect();
            if !group.is_empty() {
                stratified.push(summarize(severity.label(), sys, &group));
            }
        }
    }
    (overall, stratified)
}

pub fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

pub fn fmt_opt4(x: Option<f64>) -> String {
    x.map(fmt4).unwrap_or_default()
}

pub fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

const SUMMARY_COLUMNS: &str = "n\tWER%\tPsimI\tPsimII\tNLI\tBERT\tBleurt\tHeval\tIntegrated";

fn summary_cells(row: &SummaryRow) -> String {
    [
        row.n.to_string(),
        pct(row.wer),
        fmt4(row.psim_i),
        fmt4(row.psim_ii),
        fmt4(row.nli),
        fmt4(row.bert),
        fmt_opt4(row.bleurt),
        fmt_opt4(row.heval),
        fmt4(row.integrated),
    ]
    .join("\t")
}

pub fn summary_tsv(overall: &[SummaryRow], stratified: &[SummaryRow]) -> String {
    let mut out = String::new();
    writeln!(out, "# by system").unwrap();
    writeln!(out, "system\t{SUMMARY_COLUMNS}").unwrap();
    for row in overall {
        writeln!(out, "{}\t{}", row.system, summary_cells(row)).unwrap();
    }
    if !stratified.is_empty() {
        writeln!(out).unwrap();
        writeln!(out, "# by severity").unwrap();
        writeln!(out, "severity\tsystem\t{SUMMARY_COLUMNS}").unwrap();
        for row in stratified {
            writeln!(out, "{}\t{}\t{}", row.severity.unwrap_or(""), row.system, summary_cells(row)).unwrap();
        }
    }
    out
}

/// One correction condition of the three-block table.
#[derive(Debug, Clone, Serialize)]
pub struct BlockCells {
    pub wer: f64,
    pub psim_ii: f64,
    pub bert: Option<f64>,
    pub bleurt: Option<f64>,
    pub heval: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrectionRow {
    pub system: String,
    pub n: usize,
    pub without: BlockCells,
    pub with_all: BlockCells,
    pub improved_only: BlockCells,
}

pub fn correction_tsv(rows: &[CorrectionRow]) -> String {
    let mut out = String::from("system\tn");
    for block in ["without", "with", "improved_only"] {
        for col in ["WER%", "PsimII", "BERT", "Bleurt", "Heval"] {
            write!(out, "\t{block}:{col}").unwrap();
        }
    }
    out.push('\n');
    for row in rows {
        write!(out, "{}\t{}", row.system, row.n).unwrap();
        for b in [&row.without, &row.with_all, &row.improved_only] {
            write!(
                out,
                "\t{}\t{}\t{}\t{}\t{}",
                pct(b.wer),
                fmt4(b.psim_ii),
                fmt_opt4(b.bert),
                fmt_opt4(b.bleurt),
                fmt_opt4(b.heval)
            )
            .unwrap();
        }
        out.push('\n');
    }
    out
}
