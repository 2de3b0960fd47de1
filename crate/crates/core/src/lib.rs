//! Tversky index and F-beta estimation with analytic standard errors.
//!
//! Given the 2x2 table of labels `Z` and binary predictions `A`, the crate
//! computes the sample Tversky index `τ_n(a, b)` (F-beta is the special case
//! `a = 1/(1+β²)`, `b = β²/(1+β²)`), its delta-method asymptotic variance,
//! normal-theory confidence intervals, and conservative sample-size plans
//! that hold for any prediction rule.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below fix the type. The [`simulation`] module is `f64`
//! only.
//!
//! ```
//! use tversky_core::{confidence_interval, SummaryStats64, TverskyParams64};
//!
//! let stats = SummaryStats64::new(535, 0.535, 0.861, 0.900)?;
//! let params = TverskyParams64::from_beta(0.5)?;
//! let ci = confidence_interval(&stats, &params, 0.95)?;
//! assert!((ci.half_width - 0.032).abs() < 5e-4);
//! # Ok::<(), tversky_core::Error>(())
//! ```

pub mod bound;
pub mod counts;
pub mod error;
pub mod estimator;
pub mod params;
pub mod planner;
pub mod quantile;
pub mod scalar;
pub mod simulation;

pub use bound::{
    bound_objective, bound_table, variance_bound, variance_bound_for_max, BoundIntermediates,
};
pub use counts::ConfusionCounts;
pub use error::{Error, ErrorCategory, Result};
pub use estimator::{
    asymptotic_variance, asymptotic_variance_from_counts, confidence_interval,
    confidence_interval_from_counts, precision, recall, standard_error, tversky_index,
    tversky_odds, EstimateReport, SummaryStats,
};
pub use params::{fbeta_to_tversky, FBetaParams, TverskyParams};
pub use planner::{planning_bound, required_events, required_total, PlanResult, PLANNING_DECIMALS};
pub use quantile::{normal_cdf, normal_quantile, two_sided_z};
pub use scalar::Scalar;

pub type TverskyParams64 = TverskyParams<f64>;
pub type TverskyParams32 = TverskyParams<f32>;
pub type FBetaParams64 = FBetaParams<f64>;
pub type FBetaParams32 = FBetaParams<f32>;
pub type SummaryStats64 = SummaryStats<f64>;
pub type SummaryStats32 = SummaryStats<f32>;
pub type EstimateReport64 = EstimateReport<f64>;
pub type EstimateReport32 = EstimateReport<f32>;
pub type BoundIntermediates64 = BoundIntermediates<f64>;
pub type BoundIntermediates32 = BoundIntermediates<f32>;
pub type PlanResult64 = PlanResult<f64>;
pub type PlanResult32 = PlanResult<f32>;
