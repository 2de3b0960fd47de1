use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("no positive predictions (n11 + n01 = 0), precision is undefined")]
    NoPositivePredictions,

    #[error("no positive labels (n11 + n10 = 0), recall is undefined")]
    NoPositiveLabels,

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("probability must lie in (0, 1), got {0}")]
    Domain(f64),

    #[error("prevalence must lie in (0, 1], got {0}")]
    InvalidPrevalence(f64),

    #[error("inconsistent summary statistics: {0}")]
    InconsistentSummary(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

/// Coarse grouping used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Input data cannot support the requested quantity.
    Data,
    /// No true positives, or an empty margin.
    Degenerate,
    /// A numeric argument lies outside its domain.
    Domain,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Degenerate(_) | Error::NoPositivePredictions | Error::NoPositiveLabels => {
                ErrorCategory::Degenerate
            }
            Error::InconsistentSummary(_) | Error::InsufficientData(_) => ErrorCategory::Data,
            Error::InvalidParameter { .. }
            | Error::InvalidLevel(_)
            | Error::Domain(_)
            | Error::InvalidPrevalence(_) => ErrorCategory::Domain,
        }
    }

    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
