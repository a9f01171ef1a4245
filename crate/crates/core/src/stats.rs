//! Shared statistics: sample moments, log-log regression for convergence
//! orders, and a Kolmogorov–Smirnov statistic against the standard normal.

use serde::{Deserialize, Serialize};

/// Sample mean and standard error of the mean.
pub fn mean_stderr(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    assert!(n >= 1.0);
    let mean = data.iter().sum::<f64>() / n;
    if data.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Ordinary least squares fit of y = intercept + slope·x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

impl LineFit {
    pub fn residual_std(&self) -> f64 {
        let n = self.residuals.len() as f64;
        if n < 3.0 {
            return 0.0;
        }
        (self.residuals.iter().map(|r| r * r).sum::<f64>() / (n - 2.0)).sqrt()
    }
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = x
        .iter()
        .zip(y)
        .map(|(a, b)| b - (intercept + slope * a))
        .collect();
    Some(LineFit {
        slope,
        intercept,
        residuals,
    })
}

/// Least squares slope of log(y) against log(x); requires positive data.
pub fn fit_loglog(x: &[f64], y: &[f64]) -> Option<LineFit> {
    if x.iter().any(|&v| v <= 0.0) || y.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `data` and the standard normal CDF.
pub fn ks_statistic_standard_normal(data: &[f64]) -> f64 {
    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let cdf = standard_normal_cdf(*x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}
