//! Shapiro-Wilk normality test, Royston's (1995) algorithm AS R94.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::FitError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapiroWilk {
    #[serde(rename = "W")]
    pub w: f64,
    pub p: f64,
}

const SMALL: f64 = 1e-19;

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Half of the antisymmetric coefficient vector, largest first.
fn coefficients(n: usize, normal: &Normal) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let an25 = n as f64 + 0.25;
    let m: Vec<f64> = (1..=half)
        .map(|i| normal.inverse_cdf((i as f64 - 0.375) / an25))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / (n as f64).sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let mut a = vec![0.0; half];
    a[0] = a1;
    let first_scaled;
    let fac;
    if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        a[1] = a2;
        first_scaled = 2;
    } else {
        fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        first_scaled = 1;
    }
    for i in first_scaled..half {
        a[i] = -m[i] / fac;
    }
    a
}

pub fn shapiro_wilk(sample: &[f64]) -> Result<ShapiroWilk, FitError> {
    let n = sample.len();
    if !(3..=5000).contains(&n) {
        return Err(FitError::ShapiroSize(n));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(FitError::NonFinite);
    }
    let mut x = sample.to_vec();
    x.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let range = x[n - 1] - x[0];
    if range < SMALL {
        return Err(FitError::AllEqual);
    }

    let normal = Normal::standard();
    let half_coeffs = coefficients(n, &normal);
    // Full antisymmetric vector over the sorted sample.
    let mut a = vec![0.0; n];
    for (i, c) in half_coeffs.iter().enumerate() {
        a[i] = -c;
        a[n - 1 - i] = *c;
    }

    // W as the squared correlation between coefficients and ordered sample,
    // computed on range-scaled data as in the reference algorithm.
    let xs: Vec<f64> = x.iter().map(|v| v / range).collect();
    let nf = n as f64;
    let ma = a.iter().sum::<f64>() / nf;
    let mx = xs.iter().sum::<f64>() / nf;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (ai, xi) in a.iter().zip(&xs) {
        let (da, dx) = (ai - ma, xi - mx);
        ssa += da * da;
        ssx += dx * dx;
        sax += da * dx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w = 1.0 - (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

    let p = if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = std::f64::consts::FRAC_PI_3;
        (pi6 * (w.sqrt().asin() - stqr)).max(0.0)
    } else {
        let y = (1.0 - w).ln();
        let ln_n = nf.ln();
        let (z_num, m, s) = if n <= 11 {
            let gamma = poly(&G, nf);
            if y >= gamma {
                return Ok(ShapiroWilk { w, p: 1e-99 });
            }
            (-(gamma - y).ln(), poly(&C3, nf), poly(&C4, nf).exp())
        } else {
            (y, poly(&C5, ln_n), poly(&C6, ln_n).exp())
        };
        1.0 - normal.cdf((z_num - m) / s)
    };
    Ok(ShapiroWilk {
        w,
        p: p.clamp(0.0, 1.0),
    })
}
