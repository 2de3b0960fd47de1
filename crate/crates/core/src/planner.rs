//! Conservative sample sizes for a target standard error `δ`.
//!
//! Since `ν ≤ V(m)/(b·EZ)`, a study with `n·EZ ≥ V(m)/(δ²·b)` positive-label
//! observations, or `n ≥ V(m)/(δ²·b·EZ)` records overall, has standard error
//! at most `δ` whatever prediction rule it evaluates.

use serde::{Deserialize, Serialize};

use crate::bound::variance_bound;
use crate::error::{Error, Result};
use crate::params::TverskyParams;
use crate::scalar::Scalar;

/// Decimal places of the published bound table. Planning rounds `V` up to
/// this grid so that plans agree with hand calculations from the table.
pub const PLANNING_DECIMALS: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanResult<T> {
    /// Minimum number of observations with Z = 1.
    pub required_events: u64,
    /// Minimum overall sample size, when a prevalence was supplied.
    pub required_total: Option<u64>,
    pub delta: T,
    pub params: TverskyParams<T>,
    pub ez: Option<T>,
    /// Exact `V(max{a, b})`.
    pub v_exact: T,
    /// `V` rounded up to [`PLANNING_DECIMALS`] places, used in the plan.
    pub v_planning: T,
}

/// `V(m)` rounded up to the table grid. Never below the exact bound.
pub fn planning_bound<T: Scalar>(params: &TverskyParams<T>) -> Result<(T, T)> {
    let exact = variance_bound(params)?.v;
    let scale = T::lit(10f64.powi(PLANNING_DECIMALS));
    let rounded = (exact * scale).ceil() / scale;
    Ok((exact, rounded.max(exact)))
}

/// Ceiling that ignores representation error from inputs such as `0.01`.
fn ceil_count<T: Scalar>(x: T) -> u64 {
    let nearest = x.round();
    let tol = T::lit(64.0) * T::epsilon() * x.abs();
    let c = if (x - nearest).abs() <= tol {
        nearest
    } else {
        x.ceil()
    };
    c.to_u64().unwrap_or(u64::MAX).max(1)
}

fn check_delta<T: Scalar>(delta: T) -> Result<()> {
    if !delta.is_finite() || delta <= T::zero() {
        return Err(Error::param(
            "delta",
            delta.as_f64(),
            "must be positive and finite",
        ));
    }
    Ok(())
}

/// `ceil(V / (δ²·b))` observations with Z = 1.
pub fn required_events<T: Scalar>(delta: T, params: &TverskyParams<T>) -> Result<PlanResult<T>> {
    check_delta(delta)?;
    let (v_exact, v_planning) = planning_bound(params)?;
    let events = v_planning / (delta * delta * params.b());
    Ok(PlanResult {
        required_events: ceil_count(events),
        required_total: None,
        delta,
        params: *params,
        ez: None,
        v_exact,
        v_planning,
    })
}

/// `ceil(V / (δ²·b·EZ))` records overall, for prevalence `EZ ∈ (0, 1]`.
pub fn required_total<T: Scalar>(
    delta: T,
    params: &TverskyParams<T>,
    ez: T,
) -> Result<PlanResult<T>> {
    if !(ez > T::zero() && ez <= T::one()) {
        return Err(Error::InvalidPrevalence(ez.as_f64()));
    }
    let mut plan = required_events(delta, params)?;
    let total = plan.v_planning / (delta * delta * params.b() * ez);
    plan.required_total = Some(ceil_count(total).max(plan.required_events));
    plan.ez = Some(ez);
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f05() -> TverskyParams<f64> {
        TverskyParams::new(0.8, 0.2).unwrap()
    }

    #[test]
    fn worked_plan() {
        assert_eq!(
            required_events(0.01, &f05()).unwrap().required_events,
            10250
        );
        assert_eq!(required_events(0.02, &f05()).unwrap().required_events, 2563);
        let plan = required_total(0.01, &f05(), 0.615).unwrap();
        assert_eq!(plan.required_total, Some(16667));
        assert_eq!(plan.required_events, 10250);
        assert_eq!(
            required_total(0.01, &f05(), 1.0).unwrap().required_total,
            Some(10250)
        );
        assert_eq!(
            required_total(0.01, &f05(), 0.5).unwrap().required_total,
            Some(20500)
        );
    }

    #[test]
    fn planning_bound_is_conservative() {
        for m in [0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.7] {
            let p = TverskyParams::new(m, 0.1).unwrap();
            let (exact, rounded) = planning_bound(&p).unwrap();
            assert!(rounded >= exact && rounded - exact < 1e-4, "m={m}");
        }
    }

    #[test]
    fn halving_delta_quadruples() {
        for delta in [0.005, 0.013, 0.04] {
            let coarse = required_events(delta, &f05()).unwrap();
            let fine = required_events(delta / 2.0, &f05()).unwrap();
            let raw = |d: f64| coarse.v_planning / (d * d * 0.2);
            assert!((raw(delta / 2.0) / raw(delta) - 4.0).abs() < 1e-12);
            assert!(fine.required_events >= 4 * coarse.required_events - 4);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(required_events(0.0, &f05()).is_err());
        assert!(required_events(f64::NAN, &f05()).is_err());
        for ez in [0.0, -0.2, 1.1, f64::NAN] {
            assert!(matches!(
                required_total(0.01, &f05(), ez),
                Err(Error::InvalidPrevalence(_))
            ));
        }
    }

    #[test]
    fn f32_plan() {
        let p = TverskyParams::<f32>::new(0.8, 0.2).unwrap();
        assert_eq!(
            required_events(0.01_f32, &p).unwrap().required_events,
            10250
        );
        assert_eq!(
            required_total(0.01_f32, &p, 0.615).unwrap().required_total,
            Some(16667)
        );
    }
}
