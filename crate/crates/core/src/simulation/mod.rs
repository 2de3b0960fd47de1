//! Monte Carlo check of the analytic machinery under a two-component
//! Gaussian score model, plus a bootstrap oracle for the standard error.
//!
//! Labels are `Z ~ Bernoulli(p_z)`, scores `S | Z ~ N(mu·Z, 1)`, and
//! predictions `A = I(S > threshold)`. Only `(Z, A)` enters the statistics,
//! so replications draw the four cell counts directly from the implied
//! multinomial instead of simulating scores.

mod bootstrap;
mod histogram;
mod sampling;
mod summation;

pub use bootstrap::{bootstrap, bootstrap_se, BootstrapEstimate, MIN_RESAMPLES};
pub use histogram::{histogram_summary, HistogramSummary};
pub use sampling::{stream_rng, CellProbs};
pub use summation::{mean, sample_sd, CompensatedSum};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::confidence_interval_from_counts;
use crate::params::TverskyParams;
use crate::quantile::normal_cdf;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreModel {
    /// `P(Z = 1)`.
    pub p_z: f64,
    /// Mean score shift for `Z = 1`.
    pub mu: f64,
    pub threshold: f64,
}

impl ScoreModel {
    pub fn new(p_z: f64, mu: f64, threshold: f64) -> Result<Self> {
        if !(p_z > 0.0 && p_z < 1.0) {
            return Err(Error::param("p_z", p_z, "must lie in (0, 1)"));
        }
        if !mu.is_finite() {
            return Err(Error::param("mu", mu, "must be finite"));
        }
        // An infinite threshold is allowed: it encodes the constant rules.
        if threshold.is_nan() {
            return Err(Error::param("threshold", threshold, "must not be NaN"));
        }
        Ok(Self { p_z, mu, threshold })
    }

    /// The model used in the reference experiment: `p_z = 0.5`, `mu = 2.5`,
    /// `threshold = 1`.
    pub fn reference() -> Self {
        Self {
            p_z: 0.5,
            mu: 2.5,
            threshold: 1.0,
        }
    }

    /// `P(A = 1 | Z = 1)`.
    pub fn sensitivity(&self) -> f64 {
        normal_cdf(self.mu - self.threshold)
    }

    /// `P(A = 1 | Z = 0)`.
    pub fn false_positive_rate(&self) -> f64 {
        normal_cdf(-self.threshold)
    }

    pub fn cell_probs(&self) -> CellProbs {
        let pz = self.p_z;
        CellProbs([
            pz * self.sensitivity(),
            pz * normal_cdf(self.threshold - self.mu),
            (1.0 - pz) * self.false_positive_rate(),
            (1.0 - pz) * normal_cdf(self.threshold),
        ])
    }
}

/// Population index `τ(a, b)` implied by the model's cell probabilities.
pub fn population_tau<T: Scalar>(model: &ScoreModel, params: &TverskyParams<T>) -> Result<f64> {
    let [p11, p10, p01, _] = model.cell_probs().0;
    if p11 <= 0.0 {
        return Err(Error::Degenerate("model has P(Z = 1, A = 1) = 0".into()));
    }
    let (a, b) = (params.a().as_f64(), params.b().as_f64());
    Ok(p11 / (p11 + a * p01 + b * p10))
}

/// Population asymptotic variance `ν(a, b)` of the model.
pub fn population_variance<T: Scalar>(
    model: &ScoreModel,
    params: &TverskyParams<T>,
) -> Result<f64> {
    let tau = population_tau(model, params)?;
    let tau_sq = population_tau(model, &params.squared())?;
    let p11 = model.cell_probs().0[0];
    let odds = 1.0 / tau - 1.0;
    Ok(tau.powi(4) * (1.0 / tau_sq - 1.0 + odds * odds) / p11)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub model: ScoreModel,
    /// Records per replication.
    pub n: u64,
    pub replications: u64,
    pub params: TverskyParams<f64>,
    pub level: f64,
    pub seed: u64,
}

impl SimulationConfig {
    /// Reference experiment: 10 000 replications of 1 000 records, F0.5, 95%.
    pub fn reference(seed: u64) -> Self {
        Self {
            model: ScoreModel::reference(),
            n: 1000,
            replications: 10_000,
            params: TverskyParams::new(0.8, 0.2).expect("valid weights"),
            level: 0.95,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        ScoreModel::new(self.model.p_z, self.model.mu, self.model.threshold)?;
        if self.n == 0 {
            return Err(Error::param("n", 0.0, "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(Error::param("replications", 0.0, "must be at least 1"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidLevel(self.level));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub true_tau: f64,
    pub mean_estimate: f64,
    pub sd_estimates: f64,
    pub mean_se: f64,
    /// Fraction of non-degenerate replications whose interval covers
    /// `true_tau`.
    pub coverage: f64,
    pub covered: u64,
    pub valid_replications: u64,
    /// Replications with no true positives, excluded from every aggregate.
    pub degenerate_count: u64,
    /// Per-replication estimates in replication order.
    #[serde(skip)]
    pub estimates: Vec<f64>,
}

struct Replicate {
    tau: f64,
    se: f64,
    covered: bool,
}

/// Runs the replications in parallel. Output depends only on `config`.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let true_tau = population_tau(&config.model, &config.params)?;
    let probs = config.model.cell_probs();

    let outcomes: Vec<Result<Option<Replicate>>> = (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(config.seed, r);
            let counts = probs.sample(config.n, &mut rng);
            if counts.n11 == 0 {
                return Ok(None);
            }
            let ci = confidence_interval_from_counts(&counts, &config.params, config.level)?;
            Ok(Some(Replicate {
                tau: ci.tau,
                se: ci.se,
                covered: ci.contains(true_tau),
            }))
        })
        .collect();

    let mut estimates = Vec::with_capacity(outcomes.len());
    let mut ses = Vec::with_capacity(outcomes.len());
    let mut covered = 0u64;
    let mut degenerate_count = 0u64;
    for outcome in outcomes {
        match outcome? {
            None => degenerate_count += 1,
            Some(rep) => {
                estimates.push(rep.tau);
                ses.push(rep.se);
                covered += u64::from(rep.covered);
            }
        }
    }
    if estimates.is_empty() {
        return Err(Error::Degenerate(format!(
            "all {} replications had no true positives",
            config.replications
        )));
    }
    let valid = estimates.len() as u64;
    Ok(SimulationReport {
        true_tau,
        mean_estimate: mean(&estimates),
        sd_estimates: sample_sd(&estimates),
        mean_se: mean(&ses),
        coverage: covered as f64 / valid as f64,
        covered,
        valid_replications: valid,
        degenerate_count,
        estimates,
    })
}
