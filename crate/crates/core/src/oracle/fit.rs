use serde::{Deserialize, Serialize};

use super::OracleError;

/// Least-squares slope of `log|error|` against `log(scale)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    /// `(ln x, ln |err|)` for every grid point
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual over the fitted points
    pub residual: f64,
    /// Number of points used after trimming
    pub used: usize,
}

pub const MIN_SAMPLES: usize = 4;

/// Fit on the middle 80% of the samples, sorted by abscissa.
pub fn fit_slope(samples: &[(f64, f64)]) -> Result<SlopeFit, OracleError> {
    if samples.len() < MIN_SAMPLES {
        return Err(OracleError::InvalidInput(format!(
            "slope fit needs at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let trim = (sorted.len() as f64 * 0.1).floor() as usize;
    let mid = &sorted[trim..sorted.len() - trim];
    let n = mid.len() as f64;
    let mx = mid.iter().map(|p| p.0).sum::<f64>() / n;
    let my = mid.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = mid.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(OracleError::InvalidInput(
            "grid has a single abscissa".into(),
        ));
    }
    let sxy: f64 = mid.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (mid
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(SlopeFit {
        samples: samples.to_vec(),
        slope,
        intercept,
        residual,
        used: mid.len(),
    })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > 0.0);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

pub fn to_csv(fit: &SlopeFit) -> String {
    let mut s = String::from("log_x,log_error\n");
    for (x, y) in &fit.samples {
        s.push_str(&format!("{x},{y}\n"));
    }
    s
}
