//! Shared inputs for the benchmarks.

use benford_core::{gen_power_sequence, ExponentIntervalSpec, LogValue};

/// `n` samples with uniformly distributed base-10 exponents over six decades.
pub fn spread_sample(n: usize) -> Vec<LogValue> {
    let spec = ExponentIntervalSpec::new(10.0, -3, 6).expect("valid interval");
    gen_power_sequence(&spec, n, 1).expect("valid sample size")
}
