//! Standard normal distribution function and its inverse.
//!
//! The quantile uses Wichura's AS 241 (`PPND16`) rational approximations,
//! accurate to about 1e-16 relative in `f64`.

// Coefficients are quoted at full published precision.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const SPLIT1: f64 = 0.425;
const SPLIT2: f64 = 5.0;
const CONST1: f64 = 0.180625;
const CONST2: f64 = 1.6;

// Central region, |p - 0.5| <= 0.425.
const A: [f64; 8] = [
    3.387_132_872_796_366_608_0e0,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083_0e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061_0e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561_0e3,
];

// Intermediate tails, sqrt(-ln(min(p, 1-p))) <= 5.
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34e0,
    4.630_337_846_156_545_295_90e0,
    5.769_497_221_460_691_405_50e0,
    3.647_848_324_763_204_605_04e0,
    1.270_458_252_452_368_382_58e0,
    2.417_807_251_774_506_117_70e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_40e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87e0,
    1.676_384_830_183_803_849_40e0,
    6.897_673_349_851_000_045_50e-1,
    1.481_039_764_274_800_745_90e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946_00e-4,
    1.050_750_071_644_416_843_24e-9,
];

// Far tails.
const E: [f64; 8] = [
    6.657_904_643_501_103_777_20e0,
    5.463_784_911_164_114_369_90e0,
    1.784_826_539_917_291_335_80e0,
    2.965_605_718_285_048_912_30e-1,
    2.653_218_952_657_612_309_30e-2,
    1.242_660_947_388_078_438_60e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_90e-1,
    1.369_298_809_227_358_053_10e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591_00e-4,
    1.846_318_317_510_054_681_80e-5,
    1.421_511_758_316_445_888_70e-7,
    2.044_263_103_389_939_785_64e-15,
];

fn horner<T: Scalar>(coeffs: &[f64; 8], x: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * x + T::lit(c))
}

/// Inverse of the standard normal CDF, `Φ⁻¹(p)` for `p ∈ (0, 1)`.
pub fn normal_quantile<T: Scalar>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::Domain(p.as_f64()));
    }
    let half = T::lit(0.5);
    let q = p - half;
    if q.abs() <= T::lit(SPLIT1) {
        let r = T::lit(CONST1) - q * q;
        return Ok(q * horner(&A, r) / horner(&B, r));
    }
    let tail = if q < T::zero() { p } else { T::one() - p };
    let r = (-tail.ln()).sqrt();
    let x = if r <= T::lit(SPLIT2) {
        let r = r - T::lit(CONST2);
        horner(&C, r) / horner(&D, r)
    } else {
        let r = r - T::lit(SPLIT2);
        horner(&E, r) / horner(&F, r)
    };
    Ok(if q < T::zero() { -x } else { x })
}

/// Standard normal CDF `Φ(x)`, evaluated through `erfc` so both tails keep
/// full relative precision.
pub fn normal_cdf<T: Scalar>(x: T) -> T {
    let x = x.as_f64();
    T::lit(0.5 * libm::erfc(-x / std::f64::consts::SQRT_2))
}

/// Two-sided critical value `Φ⁻¹((1 + level) / 2)`.
pub fn two_sided_z<T: Scalar>(level: T) -> Result<T> {
    if !(level > T::zero() && level < T::one()) {
        return Err(Error::InvalidLevel(level.as_f64()));
    }
    normal_quantile((T::one() + level) * T::lit(0.5))
}
