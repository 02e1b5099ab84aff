use serde::{Deserialize, Serialize};

use crate::error::{domain_err, Result};

/// A positive number stored as its base-10 logarithm.
///
/// Sequences in this crate routinely span thousands of decades, far past the
/// range of `f64`, so every sample is carried in log space. The digits of the
/// underlying number depend only on the fractional part of the logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LogValue(f64);

impl LogValue {
    /// Wraps a base-10 logarithm. Rejects NaN and infinities.
    pub fn new(log10_value: f64) -> Result<Self> {
        if !log10_value.is_finite() {
            return domain_err(format!("log value must be finite, got {log10_value}"));
        }
        Ok(Self(log10_value))
    }

    /// Takes the logarithm of a strictly positive, finite number.
    pub fn from_positive(x: f64) -> Result<Self> {
        if x <= 0.0 || !x.is_finite() {
            return domain_err(format!("expected a positive finite number, got {x}"));
        }
        Ok(Self(x.log10()))
    }

    /// Caller guarantees `log10_value` is finite.
    #[inline]
    pub(crate) fn new_unchecked(log10_value: f64) -> Self {
        debug_assert!(log10_value.is_finite());
        Self(log10_value)
    }

    #[inline]
    pub fn log10(self) -> f64 {
        self.0
    }

    /// The represented number, when it fits in an `f64`.
    pub fn to_f64(self) -> Option<f64> {
        let x = 10f64.powf(self.0);
        (x.is_finite() && x > 0.0).then_some(x)
    }
}

impl TryFrom<f64> for LogValue {
    type Error = crate::BenfordError;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<LogValue> for f64 {
    fn from(v: LogValue) -> f64 {
        v.0
    }
}
