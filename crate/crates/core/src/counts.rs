//! Joint counts of label `Z` and prediction `A` over a validation sample.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The four cells of the 2x2 table of (label, prediction).
///
/// This is a sufficient statistic for every analytic quantity in the crate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionCounts {
    /// Z = 1, A = 1 (true positives).
    pub n11: u64,
    /// Z = 1, A = 0 (false negatives).
    pub n10: u64,
    /// Z = 0, A = 1 (false positives).
    pub n01: u64,
    /// Z = 0, A = 0 (true negatives).
    pub n00: u64,
}

impl ConfusionCounts {
    pub fn new(n11: u64, n10: u64, n01: u64, n00: u64) -> Result<Self> {
        let counts = Self { n11, n10, n01, n00 };
        counts.validate()?;
        Ok(counts)
    }

    pub fn validate(&self) -> Result<()> {
        match self.checked_total() {
            None => Err(Error::InsufficientData("total count overflows u64".into())),
            Some(0) => Err(Error::InsufficientData("sample is empty".into())),
            Some(_) => Ok(()),
        }
    }

    fn checked_total(&self) -> Option<u64> {
        self.n11
            .checked_add(self.n10)?
            .checked_add(self.n01)?
            .checked_add(self.n00)
    }

    /// Sample size `n`.
    pub fn n(&self) -> u64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    /// Number of records with Z = 1.
    pub fn positives(&self) -> u64 {
        self.n11 + self.n10
    }

    /// Number of records with A = 1.
    pub fn predicted_positives(&self) -> u64 {
        self.n11 + self.n01
    }

    fn frac<T: Scalar>(&self, k: u64) -> T {
        T::from_count(k) / T::from_count(self.n())
    }

    /// Sample mean of ZA.
    pub fn mean_za<T: Scalar>(&self) -> T {
        self.frac(self.n11)
    }

    /// Sample mean of A(1 - Z).
    pub fn mean_false_pos<T: Scalar>(&self) -> T {
        self.frac(self.n01)
    }

    /// Sample mean of Z(1 - A).
    pub fn mean_false_neg<T: Scalar>(&self) -> T {
        self.frac(self.n10)
    }

    /// Sample prevalence, the mean of Z.
    pub fn mean_z<T: Scalar>(&self) -> T {
        self.frac(self.positives())
    }

    pub fn mean_a<T: Scalar>(&self) -> T {
        self.frac(self.predicted_positives())
    }

    /// Every cell multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Option<Self> {
        let c = Self {
            n11: self.n11.checked_mul(k)?,
            n10: self.n10.checked_mul(k)?,
            n01: self.n01.checked_mul(k)?,
            n00: self.n00.checked_mul(k)?,
        };
        c.checked_total().map(|_| c)
    }

    /// Counts a single (label, prediction) record.
    pub fn record(&mut self, z: bool, a: bool) {
        match (z, a) {
            (true, true) => self.n11 += 1,
            (true, false) => self.n10 += 1,
            (false, true) => self.n01 += 1,
            (false, false) => self.n00 += 1,
        }
    }
}
