//! Prediction-rule-free upper bound on the asymptotic variance.
//!
//! For any rule, `ν(a,b) ≤ V(m) / (b·EZ)` with `m = max{a,b}` and
//! `V(m) = max_{τ∈(0,1)} τ(1−τ)(1−τ/c)²`, `c = 1/(1−m)`. The maximiser is
//! the root `τ₋` of the stationarity quadratic when `c > 1` (m < 1) and `τ₊`
//! when `c < 0` (m > 1), where `τ± = (3 + 2c ± sqrt(4c² − 4c + 9)) / 8`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::TverskyParams;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundIntermediates<T> {
    /// `max{a, b}`.
    pub max_weight: T,
    /// `1/(1 − m)`; `+∞` at `m = 1`.
    pub c: T,
    /// Larger root; `+∞` at `m = 1`.
    pub tau_plus: T,
    pub tau_minus: T,
    /// The selected maximiser in `(0, 1)`.
    pub tau_o: T,
    /// `V(m)`.
    pub v: T,
}

/// `V(max{a, b})` and the quantities it is built from.
pub fn variance_bound<T: Scalar>(params: &TverskyParams<T>) -> Result<BoundIntermediates<T>> {
    variance_bound_for_max(params.max_weight())
}

/// Same as [`variance_bound`], keyed directly on `m = max{a, b} > 0`.
pub fn variance_bound_for_max<T: Scalar>(m: T) -> Result<BoundIntermediates<T>> {
    if !m.is_finite() || m <= T::zero() {
        return Err(Error::param(
            "max(a, b)",
            m.as_f64(),
            "must be positive and finite",
        ));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);

    if m == one {
        // Limit of both branches as |c| → ∞: maximise τ(1 − τ).
        let half = T::lit(0.5);
        return Ok(BoundIntermediates {
            max_weight: m,
            c: T::infinity(),
            tau_plus: T::infinity(),
            tau_minus: half,
            tau_o: half,
            v: T::lit(0.25),
        });
    }

    let c = (one - m).recip();
    let s = (T::lit(4.0) * c * c - T::lit(4.0) * c + T::lit(9.0)).sqrt();
    let base = three + two * c;
    // (base + s)(base − s) = 16c, so each root also equals 2c over the
    // other's numerator. Use whichever form avoids cancellation.
    let (tau_plus, tau_minus) = if c > one {
        ((base + s) / T::lit(8.0), two * c / (base + s))
    } else {
        (two * c / (base - s), (base - s) / T::lit(8.0))
    };
    let tau_o = if c > one { tau_minus } else { tau_plus };
    Ok(BoundIntermediates {
        max_weight: m,
        c,
        tau_plus,
        tau_minus,
        tau_o,
        v: bound_objective(tau_o, m),
    })
}

/// `f(τ) = τ(1 − τ)(1 − (1 − m)τ)²`, written with `1/c = 1 − m` so it stays
/// finite at `m = 1`.
pub fn bound_objective<T: Scalar>(tau: T, m: T) -> T {
    let shrink = T::one() - (T::one() - m) * tau;
    tau * (T::one() - tau) * shrink * shrink
}

/// Rows `(m, V(m))` for `m = 0.5, 0.6, …, 0.9`.
pub fn bound_table<T: Scalar>() -> Vec<BoundIntermediates<T>> {
    (5..=9)
        .map(|k| {
            variance_bound_for_max(T::lit(f64::from(k) / 10.0)).expect("grid values are valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: f64) -> f64 {
        variance_bound_for_max(m).unwrap().v
    }

    #[test]
    fn table_entries() {
        let want = [
            (0.5, 0.1549),
            (0.6, 0.1695),
            (0.7, 0.1861),
            (0.8, 0.2050),
            (0.9, 0.2262),
        ];
        for (m, table) in want {
            assert!((v(m) - table).abs() <= 5e-5, "m={m} V={}", v(m));
        }
        let rows = bound_table::<f64>();
        assert_eq!(rows.len(), 5);
        assert!(rows.windows(2).all(|w| w[0].v < w[1].v));
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn high_precision_values() {
        // 30-digit evaluations of the closed form.
        assert!((v(0.5) - 0.154_921_087_356_689_789).abs() < 1e-15);
        assert!((v(0.8) - 0.204_970_225_529_479_669).abs() < 1e-15);
        assert!((v(0.7) - 0.186_089_409_722_222_214).abs() < 1e-15);
    }

    #[test]
    fn unit_weight_limit() {
        let b = variance_bound_for_max(1.0_f64).unwrap();
        assert_eq!((b.tau_o, b.v), (0.5, 0.25));
        // Both one-sided limits approach 1/4.
        for m in [1.0_f64 - 1e-9, 1.0 + 1e-9] {
            let near = variance_bound_for_max(m).unwrap();
            assert!((near.tau_o - 0.5).abs() < 1e-8, "m={m}");
            assert!((near.v - 0.25).abs() < 1e-8, "m={m}");
        }
    }

    #[test]
    fn branch_selection() {
        let lo = variance_bound_for_max(0.8_f64).unwrap();
        assert!(lo.c > 1.0);
        assert_eq!(lo.tau_o, lo.tau_minus);
        let hi = variance_bound_for_max(2.5_f64).unwrap();
        assert!(hi.c < 0.0);
        assert_eq!(hi.tau_o, hi.tau_plus);
        for b in [lo, hi] {
            assert!(b.tau_o > 0.0 && b.tau_o < 1.0);
            assert!(b.v >= 0.0);
        }
    }

    #[test]
    fn roots_are_stable_for_large_c() {
        for c in [-1e6, -1e3, -10.0, 1.5, 10.0, 1e3, 1e6] {
            let m = 1.0 - 1.0 / c;
            let b = variance_bound_for_max(m).unwrap();
            let s = (4.0 * c * c - 4.0 * c + 9.0_f64).sqrt();
            // Sum and product of the roots.
            assert!(
                ((b.tau_plus + b.tau_minus) - (3.0 + 2.0 * c) / 4.0).abs()
                    <= 1e-9 * c.abs().max(1.0)
            );
            assert!((b.tau_plus * b.tau_minus - c / 4.0).abs() <= 1e-9 * c.abs().max(1.0));
            assert!(s > 0.0);
        }
    }

    #[test]
    fn rejects_bad_weight() {
        assert!(variance_bound_for_max(0.0_f64).is_err());
        assert!(variance_bound_for_max(f64::NAN).is_err());
        assert!(variance_bound_for_max(-1.0_f64).is_err());
    }

    #[test]
    fn f32_table() {
        let rows = bound_table::<f32>();
        assert!((rows[3].v - 0.2050).abs() < 5e-5);
    }
}
