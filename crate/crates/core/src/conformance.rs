//! Digit and mantissa statistics over log-domain samples, and goodness of
//! fit against the exact digit law.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digit_law::{mantissa_in_base, DigitLawSpec, DigitPmf, DigitReader};
use crate::error::{domain_err, spec_err, Result};
use crate::log_value::LogValue;
use crate::special;

/// Minimum expected count per digit bin before the chi-square verdict is trusted.
pub const MIN_EXPECTED_PER_BIN: usize = 5;

const SHARD: usize = 1 << 15;

/// Counts of digit `spec.position()` over a sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitHistogram {
    spec: DigitLawSpec,
    counts: Vec<u64>,
    total: u64,
}

impl DigitHistogram {
    pub fn empty(spec: DigitLawSpec) -> Self {
        Self {
            spec,
            counts: vec![0; spec.digit_count()],
            total: 0,
        }
    }

    pub fn spec(&self) -> DigitLawSpec {
        self.spec
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Counts in digit order starting at [`DigitLawSpec::min_digit`].
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, digit: u32) -> Option<u64> {
        let idx = digit.checked_sub(self.spec.min_digit())?;
        self.counts.get(idx as usize).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.spec.digits().zip(self.counts.iter().copied())
    }

    /// Observed relative frequencies; all zero for an empty histogram.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Adds another shard's counts into this one.
    pub fn merge(&mut self, other: &DigitHistogram) -> Result<()> {
        if self.spec != other.spec {
            return spec_err("cannot merge histograms of different digit laws");
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        Ok(())
    }
}

/// Counts of mantissas in equal-width bins over `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MantissaHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl MantissaHistogram {
    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// `[lo, hi)` edges of bin `i`.
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let n = self.counts.len() as f64;
        (i as f64 / n, (i + 1) as f64 / n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Conforming,
    NonConforming,
    InsufficientData,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Conforming => "conforming",
            Verdict::NonConforming => "non_conforming",
            Verdict::InsufficientData => "insufficient_data",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything measured about one sample against one digit law. The JSON
/// field names are a stable interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub sample_size: u64,
    #[serde(flatten)]
    pub spec: DigitLawSpec,
    pub observed: BTreeMap<u32, f64>,
    pub expected: BTreeMap<u32, f64>,
    pub chi_square: f64,
    pub chi_square_critical: f64,
    pub mad: f64,
    pub ks_mantissa: f64,
    pub decades_spanned: f64,
    pub verdict: Verdict,
}

/// Tallies the digit at `spec.position()` of every value.
pub fn digit_histogram(values: &[LogValue], spec: DigitLawSpec) -> DigitHistogram {
    let reader = DigitReader::new(spec);
    let offset = spec.min_digit() as usize;
    let counts = values
        .par_chunks(SHARD)
        .map(|shard| {
            let mut counts = vec![0u64; spec.digit_count()];
            for v in shard {
                counts[reader.read(*v) as usize - offset] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; spec.digit_count()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    DigitHistogram {
        spec,
        counts,
        total: values.len() as u64,
    }
}

/// Bins base-10 mantissas into `bin_count` equal bins.
pub fn mantissa_histogram(values: &[LogValue], bin_count: usize) -> Result<MantissaHistogram> {
    if bin_count < 2 {
        return spec_err(format!("need at least 2 mantissa bins, got {bin_count}"));
    }
    let mut counts = vec![0u64; bin_count];
    for v in values {
        let m = mantissa_in_base(*v, 10);
        let bin = ((m * bin_count as f64) as usize).min(bin_count - 1);
        counts[bin] += 1;
    }
    Ok(MantissaHistogram {
        counts,
        total: values.len() as u64,
    })
}

fn check_pair(hist: &DigitHistogram, pmf: &DigitPmf) -> Result<()> {
    if hist.spec != pmf.spec() {
        return spec_err(format!(
            "histogram is for {:?} but the law is for {:?}",
            hist.spec,
            pmf.spec()
        ));
    }
    if hist.total == 0 {
        return domain_err("histogram is empty");
    }
    Ok(())
}

/// Pearson statistic `sum_d (count_d - N p_d)^2 / (N p_d)`.
pub fn chi_square_stat(hist: &DigitHistogram, pmf: &DigitPmf) -> Result<f64> {
    check_pair(hist, pmf)?;
    let n = hist.total as f64;
    Ok(hist
        .counts
        .iter()
        .zip(pmf.probabilities())
        .map(|(&c, &p)| {
            let expected = n * p;
            (c as f64 - expected).powi(2) / expected
        })
        .sum())
}

pub use special::chi_square_critical;

/// Mean absolute deviation between observed frequencies and the law.
pub fn mad_stat(hist: &DigitHistogram, pmf: &DigitPmf) -> Result<f64> {
    check_pair(hist, pmf)?;
    let n = hist.total as f64;
    let sum: f64 = hist
        .counts
        .iter()
        .zip(pmf.probabilities())
        .map(|(&c, &p)| (c as f64 / n - p).abs())
        .sum();
    Ok(sum / hist.counts.len() as f64)
}

/// Kolmogorov-Smirnov distance between the empirical CDF of the base-10
/// mantissas and the uniform CDF on `[0, 1)`.
pub fn ks_uniform_mantissa(values: &[LogValue]) -> Result<f64> {
    ks_uniform_mantissa_in_base(values, 10)
}

/// Same as [`ks_uniform_mantissa`] with mantissas taken in base `K`.
pub fn ks_uniform_mantissa_in_base(values: &[LogValue], base: u32) -> Result<f64> {
    if values.is_empty() {
        return domain_err("KS distance of an empty sample");
    }
    if base < 2 {
        return spec_err(format!("base must be at least 2, got {base}"));
    }
    let mut mantissas: Vec<f64> = values.iter().map(|v| mantissa_in_base(*v, base)).collect();
    mantissas.par_sort_unstable_by(f64::total_cmp);
    let n = mantissas.len() as f64;
    let distance = mantissas
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let above = (i + 1) as f64 / n - m;
            let below = m - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(distance)
}

/// `max log10 - min log10`: how many orders of magnitude the sample covers.
pub fn decades_spanned(values: &[LogValue]) -> Result<f64> {
    let Some(first) = values.first() else {
        return domain_err("decade span of an empty sample");
    };
    let (lo, hi) = values
        .iter()
        .fold((first.log10(), first.log10()), |(lo, hi), v| {
            (lo.min(v.log10()), hi.max(v.log10()))
        });
    Ok(hi - lo)
}

/// Runs every statistic and decides the verdict with a chi-square test at
/// level `alpha` on `|digits| - 1` degrees of freedom.
pub fn conformance_report(
    values: &[LogValue],
    spec: DigitLawSpec,
    alpha: f64,
) -> Result<ConformanceReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain_err(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    if values.is_empty() {
        return domain_err("cannot assess an empty sample");
    }
    let pmf = crate::benford_pmf(spec);
    let hist = digit_histogram(values, spec);
    let chi_square = chi_square_stat(&hist, &pmf)?;
    let bins = spec.digit_count();
    let critical = chi_square_critical(bins as u32 - 1, alpha)?;
    let verdict = if values.len() < MIN_EXPECTED_PER_BIN * bins {
        Verdict::InsufficientData
    } else if chi_square <= critical {
        Verdict::Conforming
    } else {
        Verdict::NonConforming
    };
    Ok(ConformanceReport {
        sample_size: hist.total,
        spec,
        observed: spec.digits().zip(hist.frequencies()).collect(),
        expected: pmf.iter().collect(),
        chi_square,
        chi_square_critical: critical,
        mad: mad_stat(&hist, &pmf)?,
        ks_mantissa: ks_uniform_mantissa_in_base(values, spec.base())?,
        decades_spanned: decades_spanned(values)?,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benford_pmf;

    fn logs(xs: &[f64]) -> Vec<LogValue> {
        xs.iter()
            .map(|&x| LogValue::from_positive(x).unwrap())
            .collect()
    }

    fn first() -> DigitLawSpec {
        DigitLawSpec::leading(10).unwrap()
    }

    fn hist_from_counts(spec: DigitLawSpec, counts: Vec<u64>) -> DigitHistogram {
        let total = counts.iter().sum();
        DigitHistogram {
            spec,
            counts,
            total,
        }
    }

    #[test]
    fn digit_histogram_examples() {
        let h = digit_histogram(&logs(&[1.0, 1.0, 2.0]), first());
        assert_eq!(
            (h.count(1), h.count(2), h.count(3), h.total()),
            (Some(2), Some(1), Some(0), 3)
        );
        let h = digit_histogram(&logs(&[0.5, 5.0, 500.0]), first());
        assert_eq!(h.count(5), Some(3));
        assert_eq!(h.counts().iter().sum::<u64>(), 3);
    }

    #[test]
    fn merge_adds_counts() {
        let mut a = digit_histogram(&logs(&[1.0, 2.0]), first());
        let b = digit_histogram(&logs(&[2.0, 30.0]), first());
        a.merge(&b).unwrap();
        assert_eq!(
            (a.count(1), a.count(2), a.count(3), a.total()),
            (Some(1), Some(2), Some(1), 4)
        );
        let other = DigitHistogram::empty(DigitLawSpec::new(10, 2).unwrap());
        assert!(a.merge(&other).is_err());
    }

    #[test]
    fn mantissa_histogram_examples() {
        let h = mantissa_histogram(&logs(&[1.0, 10.0, 100.0]), 10).unwrap();
        assert_eq!(h.counts()[0], 3);
        assert_eq!(h.total(), 3);
        assert!(mantissa_histogram(&logs(&[1.0]), 1).is_err());
        assert_eq!(h.bin_edges(3), (0.3, 0.4));
    }

    #[test]
    fn chi_square_of_exact_match_is_zero() {
        // Binary leading digit: every count lands on digit 1.
        let spec = DigitLawSpec::leading(2).unwrap();
        let h = hist_from_counts(spec, vec![40]);
        assert_eq!(chi_square_stat(&h, &benford_pmf(spec)).unwrap(), 0.0);
        assert_eq!(mad_stat(&h, &benford_pmf(spec)).unwrap(), 0.0);
    }

    #[test]
    fn chi_square_all_mass_on_nine() {
        let pmf = benford_pmf(first());
        let mut counts = vec![0; 9];
        counts[8] = 100;
        let h = hist_from_counts(first(), counts);
        let p9 = (10.0f64 / 9.0).log10();
        let oracle = 100.0 * (1.0 - p9).powi(2) / p9 + 100.0 * (1.0 - p9);
        let got = chi_square_stat(&h, &pmf).unwrap();
        assert!((got - oracle).abs() < 1e-9);
        assert!((got - 2_085.434_532_678_28).abs() < 1e-8, "{got}");
    }

    #[test]
    fn statistic_errors() {
        let pmf = benford_pmf(first());
        let empty = DigitHistogram::empty(first());
        assert!(chi_square_stat(&empty, &pmf).is_err());
        let other = digit_histogram(&logs(&[12.0]), DigitLawSpec::new(10, 2).unwrap());
        assert!(chi_square_stat(&other, &pmf).is_err());
        assert!(mad_stat(&other, &pmf).is_err());
    }

    #[test]
    fn mad_of_uniform_frequencies() {
        let pmf = benford_pmf(first());
        let h = hist_from_counts(first(), vec![1; 9]);
        let oracle: f64 = (1..=9)
            .map(|d| (1.0 / 9.0 - (1.0 + 1.0 / d as f64).log10()).abs())
            .sum::<f64>()
            / 9.0;
        let got = mad_stat(&h, &pmf).unwrap();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 0.059_717_035_109_917_6).abs() < 1e-12, "{got}");
    }

    #[test]
    fn ks_examples() {
        let quarter = [0.25, 0.5, 0.75].map(|m| LogValue::new(m).unwrap());
        assert!((ks_uniform_mantissa(&quarter).unwrap() - 0.25).abs() < 1e-15);
        let zeros = logs(&[1.0, 10.0, 1e5]);
        assert_eq!(ks_uniform_mantissa(&zeros).unwrap(), 1.0);
        assert!(ks_uniform_mantissa(&[]).is_err());
    }

    #[test]
    fn decade_span() {
        assert_eq!(decades_spanned(&logs(&[42.0])).unwrap(), 0.0);
        let v = [0.0, 40.0].map(|x| LogValue::new(x).unwrap());
        assert_eq!(decades_spanned(&v).unwrap(), 40.0);
        assert!(decades_spanned(&[]).is_err());
    }

    #[test]
    fn report_needs_enough_data() {
        let values: Vec<LogValue> = (0..10)
            .map(|i| LogValue::new(i as f64 * 0.1).unwrap())
            .collect();
        let report = conformance_report(&values, first(), 0.01).unwrap();
        assert_eq!(report.verdict, Verdict::InsufficientData);
        let forty_five: Vec<LogValue> = (0..45)
            .map(|i| LogValue::new(i as f64 / 45.0).unwrap())
            .collect();
        assert_ne!(
            conformance_report(&forty_five, first(), 0.01)
                .unwrap()
                .verdict,
            Verdict::InsufficientData
        );
        assert!(conformance_report(&[], first(), 0.01).is_err());
        assert!(conformance_report(&values, first(), 1.0).is_err());
    }

    #[test]
    fn ratio_ten_progression_is_rejected() {
        let values: Vec<LogValue> = (1..=100_000)
            .map(|j| LogValue::new(j as f64).unwrap())
            .collect();
        let report = conformance_report(&values, first(), 0.01).unwrap();
        assert_eq!(report.verdict, Verdict::NonConforming);
        assert_eq!(report.ks_mantissa, 1.0);
        assert_eq!(report.observed[&1], 1.0);
    }

    #[test]
    fn report_json_schema() {
        let values: Vec<LogValue> = (0..900)
            .map(|i| LogValue::new(i as f64 / 900.0).unwrap())
            .collect();
        let report = conformance_report(&values, first(), 0.01).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        let keys: Vec<&str> = json
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        assert_eq!(
            keys,
            [
                "sample_size",
                "base",
                "position",
                "observed",
                "expected",
                "chi_square",
                "chi_square_critical",
                "mad",
                "ks_mantissa",
                "decades_spanned",
                "verdict"
            ]
        );
        assert_eq!(json["verdict"], "conforming");
        let back: ConformanceReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
