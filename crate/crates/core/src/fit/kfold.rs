//! Seeded k-fold cross-validation around [`fit_ols`](super::fit_ols).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fit_ols, ols, pearson, FitError, WeightFit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold_index: usize,
    pub train_coeffs: Vec<f64>,
    pub train_intercept: f64,
    pub test_size: usize,
    /// `None` when the held-out predictions or targets are constant.
    pub test_pearson: Option<f64>,
    pub test_mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KFoldResult {
    pub folds: Vec<FoldReport>,
    /// Fit on every row; this is what produces the reported weights.
    #[serde(rename = "final")]
    pub final_fit: WeightFit,
    /// Correlation of the final fit's predictions with the targets.
    pub in_sample_pearson: Option<f64>,
    pub mean_fold_pearson: Option<f64>,
}

/// Seeded permutation of `0..n` cut into `k` contiguous folds; the first
/// `n % k` folds get one extra row.
pub fn split_folds(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, FitError> {
    if k < 2 || n < k {
        return Err(FitError::TooFewForFolds { n, k: k.max(2) });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(order[start..start + len].to_vec());
        start += len;
    }
    Ok(folds)
}

pub fn kfold_fit(features: &[[f64; 3]], targets: &[f64], k: usize, seed: u64) -> Result<KFoldResult, FitError> {
    if features.len() != targets.len() {
        return Err(FitError::LengthMismatch(features.len(), targets.len()));
    }
    let folds = split_folds(features.len(), k, seed)?;
    let mut reports = Vec::with_capacity(k);
    for (fold_index, test) in folds.iter().enumerate() {
        let mut in_test = vec![false; features.len()];
        for &i in test {
            in_test[i] = true;
        }
        let (train_x, train_y): (Vec<Vec<f64>>, Vec<f64>) = (0..features.len())
            .filter(|&i| !in_test[i])
            .map(|i| (features[i].to_vec(), targets[i]))
            .unzip();
        let fit = ols(&train_x, &train_y)?;
        let predicted: Vec<f64> = test.iter().map(|&i| fit.predict(&features[i])).collect();
        let actual: Vec<f64> = test.iter().map(|&i| targets[i]).collect();
        let test_mse = predicted
            .iter()
            .zip(&actual)
            .map(|(p, a)| (p - a).powi(2))
            .sum::<f64>()
            / test.len() as f64;
        reports.push(FoldReport {
            fold_index,
            train_coeffs: fit.coeffs,
            train_intercept: fit.intercept,
            test_size: test.len(),
            test_pearson: pearson(&predicted, &actual).ok(),
            test_mse,
        });
    }

    let final_fit = fit_ols(features, targets)?;
    let fitted: Vec<f64> = targets.iter().zip(&final_fit.residuals).map(|(y, e)| y - e).collect();
    let defined: Vec<f64> = reports.iter().filter_map(|f| f.test_pearson).collect();
    Ok(KFoldResult {
        in_sample_pearson: pearson(&fitted, targets).ok(),
        mean_fold_pearson: (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64),
        folds: reports,
        final_fit,
    })
}
