//! Per-metric correlation with mean human ratings.

use serde::Serialize;

use super::{integrated_score, pearson, pearson_pvalue, FitError, Weights};
use crate::scorer::ScoreVector;

#[derive(Debug, Clone)]
pub struct RatedScores {
    pub id: String,
    pub scores: ScoreVector,
    pub rating: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricCorrelation {
    pub metric: &'static str,
    /// `None` when the metric is constant over the dataset.
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub n: usize,
}

/// Metric names in their canonical (tie-breaking) order.
pub const METRICS: [&str; 6] = ["integrated", "unweighted_sum", "s_nli", "s_sem", "s_phon", "neg_wer"];

/// Correlation of each metric with the ratings, sorted by descending r
/// (undefined correlations last). WER is negated so higher is better everywhere.
pub fn metric_correlation_report(rows: &[RatedScores], weights: &Weights) -> Result<Vec<MetricCorrelation>, FitError> {
    let ratings: Vec<f64> = rows
        .iter()
        .map(|r| r.rating.ok_or_else(|| FitError::MissingRating(r.id.clone())))
        .collect::<Result<_, _>>()?;
    let series = |f: &dyn Fn(&ScoreVector) -> f64| -> Vec<f64> { rows.iter().map(|r| f(&r.scores)).collect() };
    let columns: [Vec<f64>; 6] = [
        series(&|v| integrated_score(weights, v)),
        series(&|v| v.s_nli + v.s_sem + v.s_phon),
        series(&|v| v.s_nli),
        series(&|v| v.s_sem),
        series(&|v| v.s_phon),
        series(&|v| -v.wer),
    ];
    let mut table: Vec<MetricCorrelation> = METRICS
        .iter()
        .zip(columns.iter())
        .map(|(&metric, xs)| {
            let r = pearson(xs, &ratings).ok();
            MetricCorrelation {
                metric,
                r,
                p: r.and_then(|r| pearson_pvalue(r, rows.len()).ok()),
                n: rows.len(),
            }
        })
        .collect();
    // Stable sort keeps canonical order among equal r.
    table.sort_by(|a, b| match (a.r, b.r) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Ok(table)
}
