//! Point estimates, asymptotic variance and normal-theory confidence
//! intervals for the Tversky index.
//!
//! For weights `(a, b)` the sample index is
//!
//! ```text
//! τ_n(a,b) = n11 / (n11 + a·n01 + b·n10)
//! ```
//!
//! and `√n (τ_n − τ)` is asymptotically normal with variance
//!
//! ```text
//! ν_n(a,b) = τ_n(a,b)⁴ · ( 1/τ_n(a²,b²) − 1 + (1/τ_n(a,b) − 1)² ) / E_n(ZA)
//! ```

use serde::{Deserialize, Serialize};

use crate::counts::ConfusionCounts;
use crate::error::{Error, Result};
use crate::params::TverskyParams;
use crate::quantile::two_sided_z;
use crate::scalar::Scalar;

/// Sample Tversky index `τ_n(a, b)`.
pub fn tversky_index<T: Scalar>(counts: &ConfusionCounts, params: &TverskyParams<T>) -> Result<T> {
    counts.validate()?;
    if counts.n11 == 0 {
        return Err(Error::Degenerate(
            "no true positives (n11 = 0), the index and its variance are undefined".into(),
        ));
    }
    let tp = T::from_count(counts.n11);
    let fp = T::from_count(counts.n01);
    let fneg = T::from_count(counts.n10);
    Ok(tp / (tp + params.a() * fp + params.b() * fneg))
}

/// `1/τ_n(a,b) − 1 = (a·n01 + b·n10) / n11`, evaluated without the
/// cancellation of the reciprocal form when `τ_n` is close to 1.
pub fn tversky_odds<T: Scalar>(counts: &ConfusionCounts, params: &TverskyParams<T>) -> Result<T> {
    tversky_index(counts, params)?;
    let loss = params.a() * T::from_count(counts.n01) + params.b() * T::from_count(counts.n10);
    Ok(loss / T::from_count(counts.n11))
}

pub fn precision<T: Scalar>(counts: &ConfusionCounts) -> Result<T> {
    let denom = counts.predicted_positives();
    if denom == 0 {
        return Err(Error::NoPositivePredictions);
    }
    Ok(T::from_count(counts.n11) / T::from_count(denom))
}

pub fn recall<T: Scalar>(counts: &ConfusionCounts) -> Result<T> {
    let denom = counts.positives();
    if denom == 0 {
        return Err(Error::NoPositiveLabels);
    }
    Ok(T::from_count(counts.n11) / T::from_count(denom))
}

/// The three sample quantities the variance depends on, plus `n`.
///
/// Either computed from counts or supplied directly when only published
/// summaries are available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats<T> {
    pub n: u64,
    /// `E_n(ZA)`.
    pub mean_za: T,
    /// `τ_n(a, b)`.
    pub tau_ab: T,
    /// `τ_n(a², b²)`.
    pub tau_a2b2: T,
}

impl<T: Scalar> SummaryStats<T> {
    pub fn new(n: u64, mean_za: T, tau_ab: T, tau_a2b2: T) -> Result<Self> {
        let stats = Self {
            n,
            mean_za,
            tau_ab,
            tau_a2b2,
        };
        stats.validate_ranges()?;
        Ok(stats)
    }

    /// Exact summaries of `counts`, including `τ_n(a², b²)`.
    pub fn from_counts(counts: &ConfusionCounts, params: &TverskyParams<T>) -> Result<Self> {
        Ok(Self {
            n: counts.n(),
            mean_za: counts.mean_za(),
            tau_ab: tversky_index(counts, params)?,
            tau_a2b2: tversky_index(counts, &params.squared())?,
        })
    }

    fn validate_ranges(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InsufficientData("n must be at least 1".into()));
        }
        let unit = |x: T| x >= T::zero() && x <= T::one();
        if !unit(self.mean_za) {
            return Err(Error::InconsistentSummary(format!(
                "mean_za = {} is outside [0, 1]",
                self.mean_za
            )));
        }
        for (name, tau) in [("tau_ab", self.tau_ab), ("tau_a2b2", self.tau_a2b2)] {
            if !(tau > T::zero() && tau <= T::one()) {
                return Err(Error::InconsistentSummary(format!(
                    "{name} = {tau} is outside (0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Checks `(1/τ(a²,b²) − 1) ≤ max{a,b}·(1/τ(a,b) − 1)`, which every real
    /// sample satisfies.
    fn validate_against(&self, params: &TverskyParams<T>) -> Result<()> {
        let u = self.tau_ab.recip() - T::one();
        let w = self.tau_a2b2.recip() - T::one();
        let m = params.max_weight();
        // Summaries computed in floating point carry rounding noise.
        let slack = T::lit(1e-9) * (m * u).max(T::epsilon());
        if w > m * u + slack {
            return Err(Error::InconsistentSummary(format!(
                "1/tau_a2b2 - 1 = {w} exceeds max(a, b)·(1/tau_ab - 1) = {}",
                m * u
            )));
        }
        Ok(())
    }
}

/// Asymptotic variance `ν_n(a, b)` on the per-observation scale.
pub fn asymptotic_variance<T: Scalar>(
    stats: &SummaryStats<T>,
    params: &TverskyParams<T>,
) -> Result<T> {
    stats.validate_ranges()?;
    if stats.mean_za <= T::zero() {
        return Err(Error::Degenerate(
            "E_n(ZA) = 0, the variance is undefined".into(),
        ));
    }
    stats.validate_against(params)?;
    Ok(variance_from_odds(
        stats.tau_ab,
        stats.tau_ab.recip() - T::one(),
        stats.tau_a2b2.recip() - T::one(),
        stats.mean_za,
    ))
}

/// Same as [`asymptotic_variance`] on exact counts; the odds terms are
/// taken from [`tversky_odds`] rather than reciprocals of the indices.
pub fn asymptotic_variance_from_counts<T: Scalar>(
    counts: &ConfusionCounts,
    params: &TverskyParams<T>,
) -> Result<T> {
    let tau = tversky_index(counts, params)?;
    Ok(variance_from_odds(
        tau,
        tversky_odds(counts, params)?,
        tversky_odds(counts, &params.squared())?,
        counts.mean_za(),
    ))
}

fn variance_from_odds<T: Scalar>(tau: T, odds: T, odds_sq_weights: T, mean_za: T) -> T {
    let tau2 = tau * tau;
    (tau2 * tau2 * (odds_sq_weights + odds * odds) / mean_za).max(T::zero())
}

/// Standard error `sqrt(ν_n / n)`.
pub fn standard_error<T: Scalar>(stats: &SummaryStats<T>, params: &TverskyParams<T>) -> Result<T> {
    let nu = asymptotic_variance(stats, params)?;
    Ok((nu / T::from_count(stats.n)).sqrt())
}

/// Point estimate with its normal-theory confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport<T> {
    pub tau: T,
    pub nu: T,
    pub se: T,
    /// Critical value `Φ⁻¹((1 + level)/2)`.
    pub z: T,
    /// `z · se`, before clipping.
    pub half_width: T,
    pub ci_lower: T,
    pub ci_upper: T,
    pub level: T,
    pub n: u64,
    /// Set when `τ_n = 1`: the interval has zero width and the normal
    /// approximation says nothing.
    pub boundary: bool,
}

impl<T: Scalar> EstimateReport<T> {
    pub fn contains(&self, value: T) -> bool {
        self.ci_lower <= value && value <= self.ci_upper
    }
}

pub fn confidence_interval<T: Scalar>(
    stats: &SummaryStats<T>,
    params: &TverskyParams<T>,
    level: T,
) -> Result<EstimateReport<T>> {
    let z = two_sided_z(level)?;
    let nu = asymptotic_variance(stats, params)?;
    Ok(build_report(stats.tau_ab, nu, z, level, stats.n))
}

pub fn confidence_interval_from_counts<T: Scalar>(
    counts: &ConfusionCounts,
    params: &TverskyParams<T>,
    level: T,
) -> Result<EstimateReport<T>> {
    let z = two_sided_z(level)?;
    let nu = asymptotic_variance_from_counts(counts, params)?;
    let tau = tversky_index(counts, params)?;
    Ok(build_report(tau, nu, z, level, counts.n()))
}

fn build_report<T: Scalar>(tau: T, nu: T, z: T, level: T, n: u64) -> EstimateReport<T> {
    let se = (nu / T::from_count(n)).sqrt();
    let half_width = z * se;
    let clip = |x: T| x.max(T::zero()).min(T::one());
    EstimateReport {
        tau,
        nu,
        se,
        z,
        half_width,
        ci_lower: clip(tau - half_width),
        ci_upper: clip(tau + half_width),
        level,
        n,
        boundary: tau >= T::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn counts(n11: u64, n10: u64, n01: u64, n00: u64) -> ConfusionCounts {
        ConfusionCounts::new(n11, n10, n01, n00).unwrap()
    }

    fn ab(a: f64, b: f64) -> TverskyParams<f64> {
        TverskyParams::new(a, b).unwrap()
    }

    fn orange_juice() -> SummaryStats<f64> {
        SummaryStats::new(535, 0.535, 0.861, 0.900).unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            tversky_index(&counts(50, 0, 0, 50), &ab(0.8, 0.2)).unwrap(),
            1.0
        );
        assert_relative_eq!(
            tversky_index(&counts(40, 10, 10, 40), &ab(0.5, 0.5)).unwrap(),
            0.8,
            max_relative = 1e-15
        );
        let c = counts(30, 20, 10, 40);
        let tau = tversky_index(&c, &ab(0.5, 0.5)).unwrap();
        let (p, r) = (precision::<f64>(&c).unwrap(), recall::<f64>(&c).unwrap());
        assert_relative_eq!(p, 0.75);
        assert_relative_eq!(r, 0.6);
        assert_relative_eq!(tau, 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(tau, 2.0 / (1.0 / p + 1.0 / r), max_relative = 1e-15);
    }

    #[test]
    fn precision_recall_edges() {
        let perfect = counts(50, 0, 0, 50);
        assert_eq!(precision::<f64>(&perfect).unwrap(), 1.0);
        assert_eq!(recall::<f64>(&perfect).unwrap(), 1.0);
        let none = counts(0, 5, 5, 90);
        assert_eq!(precision::<f64>(&none).unwrap(), 0.0);
        assert_eq!(recall::<f64>(&none).unwrap(), 0.0);
        assert_eq!(
            precision::<f64>(&counts(0, 5, 0, 5)),
            Err(Error::NoPositivePredictions)
        );
        assert_eq!(
            recall::<f64>(&counts(0, 0, 5, 5)),
            Err(Error::NoPositiveLabels)
        );
    }

    #[test]
    fn no_true_positives_is_degenerate() {
        let e = tversky_index(&counts(0, 5, 5, 90), &ab(0.5, 0.5)).unwrap_err();
        assert!(matches!(e, Error::Degenerate(_)));
        assert!(matches!(
            asymptotic_variance_from_counts(&counts(0, 0, 0, 10), &ab(0.5, 0.5)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn orange_juice_variance() {
        let nu = asymptotic_variance(&orange_juice(), &ab(0.8, 0.2)).unwrap();
        assert!((nu - 0.1409).abs() < 5e-5, "nu={nu}");
        let se = standard_error(&orange_juice(), &ab(0.8, 0.2)).unwrap();
        assert!((se - 0.0162).abs() < 5e-5, "se={se}");
    }

    #[test]
    fn orange_juice_interval() {
        let r = confidence_interval(&orange_juice(), &ab(0.8, 0.2), 0.95).unwrap();
        assert!((r.half_width - 0.032).abs() < 5e-4);
        assert!((r.ci_lower - 0.829).abs() < 5e-4);
        assert!((r.ci_upper - 0.893).abs() < 5e-4);
        assert_eq!(r.n, 535);
        assert!(!r.boundary);
        assert_relative_eq!(r.ci_upper - r.tau, r.half_width, max_relative = 1e-12);
    }

    #[test]
    fn perfect_predictor_has_zero_width() {
        let stats = SummaryStats::new(100, 0.5, 1.0, 1.0).unwrap();
        let nu = asymptotic_variance(&stats, &ab(0.8, 0.2)).unwrap();
        assert_eq!(nu, 0.0);
        for level in [0.5, 0.95, 0.999] {
            let r = confidence_interval(&stats, &ab(0.8, 0.2), level).unwrap();
            assert_eq!((r.ci_lower, r.ci_upper), (1.0, 1.0));
            assert!(r.boundary);
        }
        let r =
            confidence_interval_from_counts(&counts(50, 0, 0, 50), &ab(0.8, 0.2), 0.95).unwrap();
        assert_eq!(r.se, 0.0);
        assert!(r.boundary);
    }

    #[test]
    fn wider_level_nests() {
        let r95 = confidence_interval(&orange_juice(), &ab(0.8, 0.2), 0.95).unwrap();
        let r99 = confidence_interval(&orange_juice(), &ab(0.8, 0.2), 0.99).unwrap();
        assert!(r99.ci_lower < r95.ci_lower && r99.ci_upper > r95.ci_upper);
    }

    #[test]
    fn clipping_keeps_half_width() {
        let c = counts(3, 0, 1, 0);
        let r = confidence_interval_from_counts(&c, &ab(0.5, 0.5), 0.95).unwrap();
        assert_eq!(r.ci_upper, 1.0);
        assert!(r.tau + r.half_width > 1.0);
        assert!(r.ci_lower <= r.tau && r.tau <= r.ci_upper);
    }

    #[test]
    fn odds_match_reciprocal() {
        let c = counts(286, 43, 46, 160);
        let p = ab(0.8, 0.2);
        let tau = tversky_index(&c, &p).unwrap();
        assert_relative_eq!(
            tversky_odds(&c, &p).unwrap(),
            1.0 / tau - 1.0,
            max_relative = 1e-13
        );
        assert_eq!(tversky_odds(&counts(9, 0, 0, 1), &p).unwrap(), 0.0);
    }

    #[test]
    fn invalid_level() {
        for level in [0.0, 1.0, -0.5, 1.2] {
            assert_eq!(
                confidence_interval(&orange_juice(), &ab(0.8, 0.2), level),
                Err(Error::InvalidLevel(level))
            );
        }
    }

    #[test]
    fn summary_validation() {
        assert!(SummaryStats::new(0, 0.5, 0.8, 0.9).is_err());
        assert!(SummaryStats::new(10, 1.5, 0.8, 0.9).is_err());
        assert!(SummaryStats::new(10, 0.5, 0.0, 0.9).is_err());
        assert!(SummaryStats::new(10, 0.5, 0.8, 1.1).is_err());
        let zero = SummaryStats::new(10, 0.0, 0.8, 0.9).unwrap();
        assert!(matches!(
            asymptotic_variance(&zero, &ab(0.8, 0.2)),
            Err(Error::Degenerate(_))
        ));
        // Ratio 0.5/0.25 = 2 > max{a,b}.
        let bad = SummaryStats::new(10, 0.5, 0.8, 2.0 / 3.0).unwrap();
        assert!(matches!(
            asymptotic_variance(&bad, &ab(0.8, 0.2)),
            Err(Error::InconsistentSummary(_))
        ));
        let bad = SummaryStats::new(10, 0.5, 1.0, 0.9).unwrap();
        assert!(asymptotic_variance(&bad, &ab(0.8, 0.2)).is_err());
    }

    #[test]
    fn counts_path_matches_summary_path() {
        let c = counts(286, 43, 46, 160);
        let p = ab(0.8, 0.2);
        let from_counts = asymptotic_variance_from_counts(&c, &p).unwrap();
        let tau = 286.0 / (286.0 + 0.8 * 46.0 + 0.2 * 43.0);
        let tau2 = 286.0 / (286.0 + 0.64 * 46.0 + 0.04 * 43.0);
        let stats = SummaryStats::new(535, 286.0 / 535.0, tau, tau2).unwrap();
        assert_relative_eq!(
            from_counts,
            asymptotic_variance(&stats, &p).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn f32_orange_juice() {
        let stats = SummaryStats::<f32>::new(535, 0.535, 0.861, 0.900).unwrap();
        let p = TverskyParams::<f32>::new(0.8, 0.2).unwrap();
        let r = confidence_interval(&stats, &p, 0.95).unwrap();
        assert!((r.se - 0.01623).abs() < 1e-4);
        assert!((r.half_width - 0.0318).abs() < 1e-3);
    }
}
