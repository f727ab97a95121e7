//! Integrated score, weight fitting against human ratings, and the
//! statistics used to validate it.

mod kfold;
mod ols;
mod report;
mod shapiro;
pub mod stats;

pub use kfold::{kfold_fit, split_folds, FoldReport, KFoldResult};
pub use ols::{ols, OlsFit};
pub use report::{metric_correlation_report, MetricCorrelation, RatedScores};
pub use shapiro::{shapiro_wilk, ShapiroWilk};
pub use stats::{pearson, pearson_pvalue};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scorer::ScoreVector;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("feature rows have inconsistent width: expected {expected}, got {got}")]
    RaggedFeatures { expected: usize, got: usize },
    #[error("zero variance")]
    ZeroVariance,
    #[error("correlation {0} outside [-1, 1]")]
    CorrelationDomain(f64),
    #[error("Shapiro-Wilk needs 3..=5000 values, got {0}")]
    ShapiroSize(usize),
    #[error("all values are equal")]
    AllEqual,
    #[error("non-finite value in sample")]
    NonFinite,
    #[error("design matrix is rank-deficient")]
    RankDeficient,
    #[error("negative slope for {channel} ({value:.6}); normalized weights would invert its meaning")]
    NegativeCoefficient { channel: &'static str, value: f64 },
    #[error("slope coefficients sum to {0}; normalization undefined")]
    NonPositiveSum(f64),
    #[error("need at least k = {k} rows, got {n}")]
    TooFewForFolds { n: usize, k: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("record {0:?} has no rating")]
    MissingRating(String),
}

pub const CHANNELS: [&str; 3] = ["s_nli", "s_sem", "s_phon"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Weights {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, FitError> {
        let w = Weights { alpha, beta, gamma };
        if w.as_array().iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(FitError::InvalidWeights(format!(
                "{alpha},{beta},{gamma}: weights must be finite and non-negative"
            )));
        }
        Ok(w)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    /// Scales weights to sum to one; the sum must be positive.
    pub fn normalized(&self) -> Result<Weights, FitError> {
        let s = self.sum();
        if s <= 0.0 || !s.is_finite() {
            return Err(FitError::NonPositiveSum(s));
        }
        Ok(Weights {
            alpha: self.alpha / s,
            beta: self.beta / s,
            gamma: self.gamma / s,
        })
    }
}

/// `α·s_nli + β·s_sem + γ·s_phon`; no intercept.
pub fn integrated_score(weights: &Weights, v: &ScoreVector) -> f64 {
    weights.alpha * v.s_nli + weights.beta * v.s_sem + weights.gamma * v.s_phon
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFit {
    pub raw_coeffs: Vec<f64>,
    pub intercept: f64,
    pub normalized: Weights,
    pub std_errors: Vec<f64>,
    pub p_values: Vec<f64>,
    pub mse: f64,
    pub residuals: Vec<f64>,
    /// `None` when residuals are constant (exact fit) or N is out of range.
    pub shapiro: Option<ShapiroWilk>,
}

/// OLS of ratings on `[s_nli, s_sem, s_phon]` with intercept, then
/// normalization of the three slopes.
pub fn fit_ols(features: &[[f64; 3]], targets: &[f64]) -> Result<WeightFit, FitError> {
    let rows: Vec<Vec<f64>> = features.iter().map(|r| r.to_vec()).collect();
    let fit = ols(&rows, targets)?;
    weight_fit_from(fit)
}

fn weight_fit_from(fit: OlsFit) -> Result<WeightFit, FitError> {
    for (channel, &value) in CHANNELS.iter().zip(&fit.coeffs) {
        if value < 0.0 {
            return Err(FitError::NegativeCoefficient { channel, value });
        }
    }
    let raw = Weights {
        alpha: fit.coeffs[0],
        beta: fit.coeffs[1],
        gamma: fit.coeffs[2],
    };
    let normalized = raw.normalized()?;
    let shapiro = shapiro_wilk(&fit.residuals).ok();
    Ok(WeightFit {
        raw_coeffs: fit.coeffs,
        intercept: fit.intercept,
        normalized,
        std_errors: fit.std_errors,
        p_values: fit.p_values,
        mse: fit.mse,
        residuals: fit.residuals,
        shapiro,
    })
}
