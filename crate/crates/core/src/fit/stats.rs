//! Correlation and its significance.

use statrs::function::beta::beta_reg;

use super::FitError;

/// Sample Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, FitError> {
    if x.len() != y.len() {
        return Err(FitError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(FitError::TooFewPoints { need: 3, got: x.len() });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(FitError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a Student-t statistic with `df` degrees of freedom.
pub fn t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    if t == 0.0 {
        return 1.0;
    }
    beta_reg(df / 2.0, 0.5, df / (df + t * t)).clamp(0.0, 1.0)
}

/// Two-sided p-value for a sample correlation `r` over `n` points.
///
/// Perfect correlation (|r| = 1) gives p = 0.
pub fn pearson_pvalue(r: f64, n: usize) -> Result<f64, FitError> {
    if n < 3 {
        return Err(FitError::TooFewPoints { need: 3, got: n });
    }
    if !r.is_finite() || r.abs() > 1.0 {
        return Err(FitError::CorrelationDomain(r));
    }
    if r.abs() == 1.0 {
        return Ok(0.0);
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    Ok(t_two_sided(t, df))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 5.0, 8.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]), Err(FitError::LengthMismatch(3, 2))));
        assert!(matches!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(FitError::ZeroVariance)));
        assert!(matches!(pearson(&[1.0, 2.0], &[1.0, 2.0]), Err(FitError::TooFewPoints { .. })));
    }

    #[test]
    fn pvalue_edges() {
        assert_eq!(pearson_pvalue(0.0, 10).unwrap(), 1.0);
        assert_eq!(pearson_pvalue(0.0, 1000).unwrap(), 1.0);
        assert_eq!(pearson_pvalue(1.0, 10).unwrap(), 0.0);
        assert!(pearson_pvalue(1.5, 10).is_err());
        assert!(pearson_pvalue(f64::NAN, 10).is_err());
        assert!(pearson_pvalue(0.5, 2).is_err());
    }

    #[test]
    fn pvalue_shrinks_with_n() {
        let mut last = 1.0;
        for n in [5, 10, 20, 40, 80, 160] {
            let p = pearson_pvalue(0.3, n).unwrap();
            assert!(p < last);
            last = p;
        }
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant(
            pts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..30),
            scale in 0.1f64..10.0,
            shift in -5.0f64..5.0,
        ) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            if let Ok(r) = pearson(&x, &y) {
                let x2: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
                let r2 = pearson(&x2, &y).unwrap();
                prop_assert!((r - r2).abs() < 1e-9);
            }
        }
    }
}
