//! Exact digit laws for arbitrary base and digit position, and the
//! characteristic/mantissa split that determines every significant digit.

use std::f64::consts::LN_10;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{domain_err, spec_err, BenfordError, Result};
use crate::log_value::LogValue;

/// Deepest digit position supported. Reading digit `n` scales the antilog of
/// the mantissa by `K^(n-1)`; at `n = 4` a double still carries 11 guard
/// digits in base 10.
pub const MAX_POSITION: u32 = 4;

/// Largest accepted number base.
pub const MAX_BASE: u32 = 1 << 16;

/// Upper bound on `K^(n-1)`, the number of leading-digit prefixes summed per
/// probability at position `n`.
pub const MAX_PREFIXES: u64 = 1 << 20;

/// Mantissas in `[1 - MANTISSA_SNAP, 1)` are treated as an exact power of the
/// base (mantissa 0, characteristic + 1).
pub const MANTISSA_SNAP: f64 = 1e-13;

/// Relative distance below which a scaled antilog is taken to sit exactly on
/// a digit boundary.
pub const DIGIT_SNAP: f64 = 1e-13;

/// Which digit, in which base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct DigitLawSpec {
    base: u32,
    position: u32,
}

#[derive(Deserialize)]
struct RawSpec {
    base: u32,
    position: u32,
}

impl TryFrom<RawSpec> for DigitLawSpec {
    type Error = BenfordError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        Self::new(raw.base, raw.position)
    }
}

impl DigitLawSpec {
    pub fn new(base: u32, position: u32) -> Result<Self> {
        if !(2..=MAX_BASE).contains(&base) {
            return spec_err(format!("base must be in 2..={MAX_BASE}, got {base}"));
        }
        if !(1..=MAX_POSITION).contains(&position) {
            return spec_err(format!(
                "digit position must be in 1..={MAX_POSITION}, got {position}"
            ));
        }
        let prefixes = (base as u64).checked_pow(position - 1);
        if prefixes.is_none_or(|p| p > MAX_PREFIXES) {
            return spec_err(format!(
                "position {position} is too deep for base {base} (more than {MAX_PREFIXES} prefixes)"
            ));
        }
        Ok(Self { base, position })
    }

    /// Leading digit in the given base.
    pub fn leading(base: u32) -> Result<Self> {
        Self::new(base, 1)
    }

    #[inline]
    pub fn base(&self) -> u32 {
        self.base
    }

    #[inline]
    pub fn position(&self) -> u32 {
        self.position
    }

    /// Digits that can occur: `1..=K-1` for the leading digit, `0..=K-1` after it.
    pub fn digits(&self) -> RangeInclusive<u32> {
        self.min_digit()..=self.base - 1
    }

    #[inline]
    pub fn min_digit(&self) -> u32 {
        u32::from(self.position == 1)
    }

    pub fn digit_count(&self) -> usize {
        (self.base - self.min_digit()) as usize
    }

    pub(crate) fn ln_base(&self) -> f64 {
        f64::from(self.base).ln()
    }
}

/// Exact digit probabilities for a [`DigitLawSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct DigitPmf {
    spec: DigitLawSpec,
    probabilities: Vec<f64>,
}

impl DigitPmf {
    pub fn spec(&self) -> DigitLawSpec {
        self.spec
    }

    pub fn probability(&self, digit: u32) -> Option<f64> {
        let idx = digit.checked_sub(self.spec.min_digit())?;
        self.probabilities.get(idx as usize).copied()
    }

    /// Probabilities in digit order, starting at [`DigitLawSpec::min_digit`].
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.spec.digits().zip(self.probabilities.iter().copied())
    }
}

/// The Benford law for one digit position in base `K`.
///
/// Position 1: `P(d) = log_K(1 + 1/d)`. Position `n >= 2`: the probability
/// of every prefix `m` with `n - 1` digits being followed by `d`, summed:
/// `P(d) = sum_{m=K^(n-2)}^{K^(n-1)-1} log_K(1 + 1/(K m + d))`.
pub fn benford_pmf(spec: DigitLawSpec) -> DigitPmf {
    let k = u64::from(spec.base);
    let ln_k = spec.ln_base();
    let probabilities = if spec.position == 1 {
        spec.digits()
            .map(|d| (1.0 / f64::from(d)).ln_1p() / ln_k)
            .collect()
    } else {
        let first = k.pow(spec.position - 2);
        let last = k.pow(spec.position - 1);
        spec.digits()
            .map(|d| {
                // Smallest terms first.
                let sum: f64 = (first..last)
                    .rev()
                    .map(|m| (1.0 / (k * m + u64::from(d)) as f64).ln_1p())
                    .sum();
                sum / ln_k
            })
            .collect()
    };
    DigitPmf {
        spec,
        probabilities,
    }
}

/// Integer and fractional parts of a logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MantissaDecomposition {
    pub characteristic: i64,
    pub mantissa: f64,
}

impl MantissaDecomposition {
    /// Splits an already-computed logarithm. The mantissa is always in `[0, 1)`.
    pub fn from_log(log_value: f64) -> Self {
        debug_assert!(log_value.is_finite());
        let floor = log_value.floor();
        let mut characteristic = floor as i64;
        let mut mantissa = log_value - floor;
        if mantissa >= 1.0 - MANTISSA_SNAP {
            mantissa = 0.0;
            characteristic += 1;
        }
        Self {
            characteristic,
            mantissa,
        }
    }

    pub fn reconstruct(&self) -> f64 {
        self.characteristic as f64 + self.mantissa
    }
}

/// `log_K x` split into characteristic and mantissa.
pub fn decompose_log(x: f64, base: u32) -> Result<MantissaDecomposition> {
    if !(2..=MAX_BASE).contains(&base) {
        return spec_err(format!("base must be in 2..={MAX_BASE}, got {base}"));
    }
    if x <= 0.0 || !x.is_finite() {
        return domain_err(format!(
            "logarithm needs a positive finite argument, got {x}"
        ));
    }
    let log_k = match base {
        10 => x.log10(),
        2 => x.log2(),
        _ => x.ln() / f64::from(base).ln(),
    };
    Ok(MantissaDecomposition::from_log(log_k))
}

/// Mantissa of a log-domain value re-expressed in base `K`.
pub fn mantissa_in_base(value: LogValue, base: u32) -> f64 {
    let log_k = if base == 10 {
        value.log10()
    } else {
        value.log10() * (LN_10 / f64::from(base).ln())
    };
    MantissaDecomposition::from_log(log_k).mantissa
}

/// Reads the digit at `spec.position()` from values in log domain. Cached
/// constants make it cheap to apply to millions of samples.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DigitReader {
    base: u32,
    base_f: f64,
    to_base: f64,
    shift: f64,
    low: u64,
    high: u64,
}

impl DigitReader {
    pub(crate) fn new(spec: DigitLawSpec) -> Self {
        let base = spec.base;
        let k = u64::from(base);
        Self {
            base,
            base_f: f64::from(base),
            to_base: if base == 10 {
                1.0
            } else {
                LN_10 / spec.ln_base()
            },
            shift: f64::from(spec.position - 1),
            low: k.pow(spec.position - 1),
            high: k.pow(spec.position),
        }
    }

    #[inline]
    pub(crate) fn read(&self, value: LogValue) -> u32 {
        let mantissa = MantissaDecomposition::from_log(value.log10() * self.to_base).mantissa;
        let scaled = self.base_f.powf(mantissa + self.shift);
        // Half-open digit bins: a value exactly on a boundary starts the upper bin.
        let nearest = scaled.round();
        let whole = if (scaled - nearest).abs() <= DIGIT_SNAP * scaled {
            nearest
        } else {
            scaled.floor()
        };
        let mut prefix = whole as u64;
        if prefix >= self.high {
            prefix = self.low;
        }
        prefix = prefix.max(self.low);
        (prefix % u64::from(self.base)) as u32
    }
}

/// Digit `n` of the number whose logarithm is `value`:
/// `floor(K^(m + n - 1)) mod K` with `m` the base-`K` mantissa.
pub fn nth_digit_from_log(value: LogValue, spec: DigitLawSpec) -> u32 {
    DigitReader::new(spec).read(value)
}
