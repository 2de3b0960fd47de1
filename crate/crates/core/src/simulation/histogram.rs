use serde::{Deserialize, Serialize};

use super::summation::{mean, CompensatedSum};
use crate::error::{Error, Result};

/// Equal-width histogram plus moment diagnostics of normality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSummary {
    pub count: u64,
    pub min: f64,
    pub max: f64,
    pub bin_width: f64,
    /// Left edges of the bins; the last bin is closed on the right.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub mean: f64,
    /// Moment skewness `m3 / m2^1.5`; `None` when the values are constant.
    pub skewness: Option<f64>,
    /// `m4 / m2² − 3`; `None` when the values are constant.
    pub excess_kurtosis: Option<f64>,
}

pub fn histogram_summary(estimates: &[f64], bins: usize) -> Result<HistogramSummary> {
    if estimates.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 estimates, got {}",
            estimates.len()
        )));
    }
    if bins == 0 {
        return Err(Error::param("bins", 0.0, "must be at least 1"));
    }
    if estimates.iter().any(|x| !x.is_finite()) {
        return Err(Error::InsufficientData("estimates must be finite".into()));
    }
    let min = estimates.iter().copied().fold(f64::INFINITY, f64::min);
    let max = estimates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / bins as f64;

    let mut counts = vec![0u64; bins];
    for &x in estimates {
        let idx = if width > 0.0 {
            (((x - min) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[idx] += 1;
    }
    let edges = (0..bins).map(|i| min + width * i as f64).collect();

    let m = mean(estimates);
    let central = |k: i32| {
        estimates
            .iter()
            .map(|x| (x - m).powi(k))
            .collect::<CompensatedSum>()
            .value()
            / estimates.len() as f64
    };
    let m2 = central(2);
    let (skewness, excess_kurtosis) = if m2 > 0.0 {
        (
            Some(central(3) / m2.powf(1.5)),
            Some(central(4) / (m2 * m2) - 3.0),
        )
    } else {
        (None, None)
    };

    Ok(HistogramSummary {
        count: estimates.len() as u64,
        min,
        max,
        bin_width: width,
        edges,
        counts,
        mean: m,
        skewness,
        excess_kurtosis,
    })
}
