//! Ordinary least squares with intercept, via Householder QR.

use serde::{Deserialize, Serialize};

use super::stats::t_two_sided;
use super::FitError;

/// Least-squares fit of `y ≈ intercept + Σ coeffs[k] · x[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub coeffs: Vec<f64>,
    pub intercept: f64,
    pub std_errors: Vec<f64>,
    pub intercept_std_error: f64,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub mse: f64,
    pub df_resid: usize,
}

impl OlsFit {
    pub fn predict(&self, row: &[f64]) -> f64 {
        self.intercept + self.coeffs.iter().zip(row).map(|(c, x)| c * x).sum::<f64>()
    }
}

/// Relative threshold on |R_kk| below which the design is rank-deficient.
const RANK_TOL: f64 = 1e-10;

pub fn ols(features: &[Vec<f64>], targets: &[f64]) -> Result<OlsFit, FitError> {
    let n = features.len();
    if n != targets.len() {
        return Err(FitError::LengthMismatch(n, targets.len()));
    }
    let k = features.first().map(Vec::len).unwrap_or(0);
    if let Some(row) = features.iter().find(|r| r.len() != k) {
        return Err(FitError::RaggedFeatures { expected: k, got: row.len() });
    }
    let p = k + 1;
    if n <= p {
        return Err(FitError::TooFewPoints { need: p + 1, got: n });
    }

    // Column-major design with leading intercept column.
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    cols.push(vec![1.0; n]);
    for j in 0..k {
        cols.push(features.iter().map(|r| r[j]).collect());
    }
    let mut qty = targets.to_vec();

    let scale = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    for j in 0..p {
        let norm = cols[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= RANK_TOL * scale {
            return Err(FitError::RankDeficient);
        }
        let alpha = if cols[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = cols[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let reflect = |col: &mut [f64]| {
            let dot: f64 = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        };
        for col in cols.iter_mut().skip(j) {
            reflect(&mut col[j..]);
        }
        reflect(&mut qty[j..]);
    }

    // Upper-triangular R: r[i][j] = cols[j][i] for i <= j.
    let r = |i: usize, j: usize| cols[j][i];
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| r(i, j) * beta[j]).sum();
        beta[i] = (qty[i] - s) / r(i, i);
    }

    // (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ; diag via rows of R⁻¹.
    let mut rinv = vec![vec![0.0; p]; p];
    #[allow(clippy::needless_range_loop)]
    for j in 0..p {
        rinv[j][j] = 1.0 / r(j, j);
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|m| r(i, m) * rinv[m][j]).sum();
            rinv[i][j] = -s / r(i, i);
        }
    }
    let xtx_inv_diag: Vec<f64> = (0..p)
        .map(|i| rinv[i].iter().map(|v| v * v).sum())
        .collect();

    let residuals: Vec<f64> = features
        .iter()
        .zip(targets)
        .map(|(row, y)| y - beta[0] - beta[1..].iter().zip(row).map(|(b, x)| b * x).sum::<f64>())
        .collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let df_resid = n - p;
    let sigma2 = rss / df_resid as f64;
    let se: Vec<f64> = xtx_inv_diag.iter().map(|d| (sigma2 * d).sqrt()).collect();

    let (t_values, p_values): (Vec<f64>, Vec<f64>) = beta[1..]
        .iter()
        .zip(&se[1..])
        .map(|(b, s)| {
            if *s == 0.0 {
                if *b == 0.0 {
                    (0.0, 1.0)
                } else {
                    (b.signum() * f64::INFINITY, 0.0)
                }
            } else {
                let t = b / s;
                (t, t_two_sided(t, df_resid as f64))
            }
        })
        .unzip();

    Ok(OlsFit {
        intercept: beta[0],
        coeffs: beta[1..].to_vec(),
        intercept_std_error: se[0],
        std_errors: se[1..].to_vec(),
        t_values,
        p_values,
        mse: rss / n as f64,
        residuals,
        df_resid,
    })
}
