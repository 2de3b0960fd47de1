use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Weights of the Tversky index: `a` on false positives, `b` on false negatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TverskyParams<T> {
    a: T,
    b: T,
}

impl<T: Scalar> TverskyParams<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        check_weight("a", a)?;
        check_weight("b", b)?;
        Ok(Self { a, b })
    }

    /// Weights inducing the F-beta measure.
    pub fn from_beta(beta: T) -> Result<Self> {
        fbeta_to_tversky(FBetaParams::new(beta)?)
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// `max{a, b}`, the only parameter the variance bound depends on.
    pub fn max_weight(&self) -> T {
        self.a.max(self.b)
    }

    /// `(a², b²)`, which enters the asymptotic variance.
    pub fn squared(&self) -> Self {
        Self {
            a: self.a * self.a,
            b: self.b * self.b,
        }
    }
}

fn check_weight<T: Scalar>(name: &'static str, w: T) -> Result<()> {
    if !w.is_finite() {
        return Err(Error::param(name, w.as_f64(), "must be finite"));
    }
    if w <= T::zero() {
        return Err(Error::param(name, w.as_f64(), "must be positive"));
    }
    Ok(())
}

/// Importance parameter of the F-beta measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FBetaParams<T> {
    beta: T,
}

impl<T: Scalar> FBetaParams<T> {
    pub fn new(beta: T) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::param("beta", beta.as_f64(), "must be finite"));
        }
        if beta <= T::zero() {
            return Err(Error::param("beta", beta.as_f64(), "must be positive"));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> T {
        self.beta
    }
}

/// Maps β to `a = 1/(1+β²)`, `b = β²/(1+β²)`, so that `a + b = 1`.
///
/// Fails only when β is so extreme that one weight rounds to zero.
pub fn fbeta_to_tversky<T: Scalar>(fb: FBetaParams<T>) -> Result<TverskyParams<T>> {
    let b2 = fb.beta * fb.beta;
    let denom = T::one() + b2;
    TverskyParams::new(T::one() / denom, b2 / denom)
        .map_err(|_| Error::param("beta", fb.beta.as_f64(), "too extreme for the scalar type"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_betas() {
        let cases = [(0.5, 0.8, 0.2), (1.0, 0.5, 0.5), (2.0, 0.2, 0.8)];
        for (beta, a, b) in cases {
            let p = TverskyParams::<f64>::from_beta(beta).unwrap();
            assert!((p.a() - a).abs() < 1e-15, "beta={beta}");
            assert!((p.b() - b).abs() < 1e-15, "beta={beta}");
            assert!((p.a() + p.b() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn f32_betas() {
        let p = TverskyParams::<f32>::from_beta(0.5).unwrap();
        assert!((p.a() - 0.8).abs() < 1e-6);
        assert!((p.b() - 0.2).abs() < 1e-6);
    }

    #[test]
    fn invalid_beta() {
        for beta in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                FBetaParams::new(beta),
                Err(Error::InvalidParameter { name: "beta", .. })
            ));
        }
    }

    #[test]
    fn invalid_weights() {
        assert!(TverskyParams::new(0.0, 0.5).is_err());
        assert!(TverskyParams::new(0.5, -0.1).is_err());
        assert!(TverskyParams::new(f64::NAN, 0.5).is_err());
        assert!(TverskyParams::new(0.5, f64::INFINITY).is_err());
        assert!(TverskyParams::new(3.0, 0.5).is_ok());
    }

    #[test]
    fn extreme_beta_rejected() {
        assert!(TverskyParams::<f64>::from_beta(1e200).is_err());
        assert!(TverskyParams::<f32>::from_beta(1e-30).is_err());
    }

    #[test]
    fn beta_weights_in_unit_interval() {
        for beta in [1e-3, 0.1, 0.7, 1.3, 10.0, 1e3] {
            let p = TverskyParams::<f64>::from_beta(beta).unwrap();
            assert!(p.a() > 0.0 && p.a() < 1.0);
            assert!(p.b() > 0.0 && p.b() < 1.0);
        }
    }
}
