//! Least-squares exponent of `|D|` against `n`.
//!
//! The slope of `log |D|` on `log n` is a descriptive statistic of the
//! measured sizes, not an estimate of any asymptotic exponent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ExperimentRow;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// `log |D| - (intercept + slope log n)` per point, in input order.
    pub residuals: Vec<f64>,
}

/// Fits `log y = intercept + slope log x` over `(x, y)` pairs.
pub fn fit_exponent(points: &[(u64, u64)]) -> Result<ExponentFit> {
    let mut distinct: Vec<u64> = points.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::TooFewPoints(distinct.len()));
    }
    if points.iter().any(|&(x, y)| x == 0 || y == 0) {
        return Err(Error::InvalidParameter("sizes must be positive".into()));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| ((x as f64).ln(), (y as f64).ln()))
        .collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = logs.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    Ok(ExponentFit {
        slope,
        intercept,
        residuals,
    })
}

/// Fit over rows that carry an image size.
pub fn fit_rows(rows: &[ExperimentRow]) -> Result<ExponentFit> {
    let points: Vec<(u64, u64)> = rows
        .iter()
        .filter_map(|r| r.image_size.map(|d| (r.n, d)))
        .collect();
    fit_exponent(&points)
}
