//! Exact Benford digit laws and the machinery to test data against them.
//!
//! Numbers are carried as base-10 logarithms ([`LogValue`]) so sequences
//! spanning thousands of decades stay exact where it matters: the digits of
//! a number depend only on the mantissa of its logarithm.
//!
//! * [`digit_law`]: probabilities for any base and digit position, digit and
//!   mantissa extraction.
//! * [`wrapped`]: the normal density folded onto one decade.
//! * [`sequences`]: seeded generators for power, product and generalized
//!   geometric sequences.
//! * [`conformance`]: histograms, chi-square, MAD, KS and the verdict.

pub mod conformance;
pub mod digit_law;
pub mod error;
pub mod log_value;
pub mod rng;
pub mod sequences;
pub mod special;
pub mod wrapped;

pub use conformance::{
    chi_square_critical, chi_square_stat, conformance_report, decades_spanned, digit_histogram,
    ks_uniform_mantissa, ks_uniform_mantissa_in_base, mad_stat, mantissa_histogram,
    ConformanceReport, DigitHistogram, MantissaHistogram, Verdict,
};
pub use digit_law::{
    benford_pmf, decompose_log, mantissa_in_base, nth_digit_from_log, DigitLawSpec, DigitPmf,
    MantissaDecomposition, MAX_POSITION,
};
pub use error::{BenfordError, Result};
pub use log_value::LogValue;
pub use sequences::{
    derive_log_moments, gen_geometric_sequence, gen_power_sequence, gen_product_samples,
    scale_sequence, DerivedLogMoments, ExponentIntervalSpec, GeometricMode, GeometricSeqSpec,
    ProductSpec, SequenceSpec, SourceDistribution, SourceKind,
};
pub use wrapped::{wrapped_gaussian_density, wrapped_gaussian_flatness};

/// Significance level used for verdicts unless the caller picks another.
pub const DEFAULT_ALPHA: f64 = 0.01;
