//! Nonparametric bootstrap of the sample Tversky index.
//!
//! Used only as an independent check of the analytic standard error.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::{stream_rng, CellProbs};
use super::summation::sample_sd;
use crate::counts::ConfusionCounts;
use crate::error::{Error, Result};
use crate::estimator::tversky_index;
use crate::params::TverskyParams;
use crate::scalar::Scalar;

pub const MIN_RESAMPLES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapEstimate {
    /// Standard deviation of the resampled indices.
    pub se: f64,
    pub resamples: u64,
    /// Resamples without true positives, left out of `se`.
    pub skipped: u64,
}

pub fn bootstrap<T: Scalar>(
    counts: &ConfusionCounts,
    params: &TverskyParams<T>,
    resamples: u64,
    seed: u64,
) -> Result<BootstrapEstimate> {
    if resamples < MIN_RESAMPLES {
        return Err(Error::param(
            "resamples",
            resamples as f64,
            "must be at least 100",
        ));
    }
    // Validates counts and rejects n11 = 0.
    tversky_index(counts, params)?;
    let params = TverskyParams::new(params.a().as_f64(), params.b().as_f64())?;
    let probs = CellProbs::from_counts(counts);
    let n = counts.n();

    let draws: Vec<Option<f64>> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let resample = probs.sample(n, &mut stream_rng(seed, r));
            tversky_index(&resample, &params).ok()
        })
        .collect();
    let taus: Vec<f64> = draws.iter().flatten().copied().collect();
    let skipped = resamples - taus.len() as u64;
    if skipped * 2 > resamples {
        return Err(Error::Degenerate(format!(
            "{skipped} of {resamples} bootstrap resamples had no true positives"
        )));
    }
    Ok(BootstrapEstimate {
        se: sample_sd(&taus),
        resamples,
        skipped,
    })
}

/// Bootstrap standard error of `τ_n(a, b)`.
pub fn bootstrap_se<T: Scalar>(
    counts: &ConfusionCounts,
    params: &TverskyParams<T>,
    resamples: u64,
    seed: u64,
) -> Result<f64> {
    bootstrap(counts, params, resamples, seed).map(|b| b.se)
}
