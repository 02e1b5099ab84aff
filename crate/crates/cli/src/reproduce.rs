//! Fixed-seed reruns of the published quantitative claims.
//!
//! Every claim derives its own seeds from the run seed, so a claim's result
//! does not depend on which other claims ran. Thresholds are fixed; the
//! measured quantities go into `details`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use benford_core::{
    benford_pmf, chi_square_critical, chi_square_stat, conformance_report, digit_histogram,
    gen_geometric_sequence, gen_power_sequence, gen_product_samples, mad_stat, scale_sequence,
    sequences::uniform_unit_samples, wrapped_gaussian_flatness, DigitLawSpec, ExponentIntervalSpec,
    GeometricMode, GeometricSeqSpec, LogValue, ProductSpec, Result, SourceDistribution, Verdict,
};
use clap::ValueEnum;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 2024;

/// First-digit probabilities as printed to four decimals.
#[allow(clippy::approx_constant)]
pub const FIRST_DIGIT_TABLE: [f64; 9] = [
    0.3010, 0.1761, 0.1249, 0.0969, 0.0792, 0.0669, 0.0580, 0.0512, 0.0458,
];

const ALPHA: f64 = 0.01;
const GR_SAMPLES: usize = 1_000_000;
const MAX_DEVIATION: f64 = 0.002;
const SCALE_TRIALS: usize = 100;
const SCALE_MIN_CONFORMING: usize = 99;
const PRODUCT_SAMPLES: usize = 100_000;
const MAD_CONVERGED: f64 = 0.005;
const MAD_NOT_CONVERGED: f64 = 0.02;
const GEOMETRIC_TERMS: usize = 10_000;
const GEOMETRIC_KS: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ClaimId {
    Table1,
    GrUniform,
    ScaleInvariance,
    BaseInvariance,
    ProductMSmall,
    ProductMLarge,
    SigmaFlatness,
    GeoseqFig3,
    DeepDigitUniformity,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::Table1,
        ClaimId::GrUniform,
        ClaimId::ScaleInvariance,
        ClaimId::BaseInvariance,
        ClaimId::ProductMSmall,
        ClaimId::ProductMLarge,
        ClaimId::SigmaFlatness,
        ClaimId::GeoseqFig3,
        ClaimId::DeepDigitUniformity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Table1 => "table1",
            ClaimId::GrUniform => "gr_uniform",
            ClaimId::ScaleInvariance => "scale_invariance",
            ClaimId::BaseInvariance => "base_invariance",
            ClaimId::ProductMSmall => "product_m_small",
            ClaimId::ProductMLarge => "product_m_large",
            ClaimId::SigmaFlatness => "sigma_flatness",
            ClaimId::GeoseqFig3 => "geoseq_fig3",
            ClaimId::DeepDigitUniformity => "deep_digit_uniformity",
        }
    }

    fn description(self) -> &'static str {
        match self {
            ClaimId::Table1 => "first-digit law matches the four-decimal table within 5e-5",
            ClaimId::GrUniform => {
                "uniform exponents give first digits within 0.002 and a passing chi-square (N = 1e6)"
            }
            ClaimId::ScaleInvariance => {
                "a conforming sample stays conforming in at least 99 of 100 random rescalings"
            }
            ClaimId::BaseInvariance => {
                "base-8 analysis of 3^R, R uniform on [0, log_3 8), is within 0.002 with a passing chi-square"
            }
            ClaimId::ProductMSmall => {
                "products of 5 factors from [1,10) have MAD < 0.005; 10 factors from [5,6) have MAD > 0.02"
            }
            ClaimId::ProductMLarge => "products of 400 factors from [5,6) have MAD < 0.005",
            ClaimId::SigmaFlatness => {
                "wrapped Gaussian flatness: sigma 1 < 5e-8, sigma 10 < 1e-12, sigma 0.3 within 10% of 0.338"
            }
            ClaimId::GeoseqFig3 => {
                "10,000-term geometric sequence on [1, 9.9] spans > 40 decades, KS < 0.02, passing chi-square"
            }
            ClaimId::DeepDigitUniformity => "fourth-digit law is within 0.001 of uniform",
        }
    }

    /// Offset mixed into the run seed for this claim.
    fn seed_offset(self) -> u64 {
        (self as u64 + 1) << 32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: ClaimId,
    pub status: ClaimStatus,
    pub description: &'static str,
    pub details: BTreeMap<String, f64>,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.status == ClaimStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproduceRun {
    pub seed: u64,
    pub claims: Vec<ClaimResult>,
}

impl ReproduceRun {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(ClaimResult::passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for claim in &self.claims {
            let status = if claim.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{status} {}: {}", claim.id.as_str(), claim.description);
            for (key, value) in &claim.details {
                let _ = writeln!(s, "    {key} = {value}");
            }
        }
        s
    }
}

struct Details {
    map: BTreeMap<String, f64>,
    pass: bool,
}

impl Details {
    fn new() -> Self {
        Self {
            map: BTreeMap::new(),
            pass: true,
        }
    }

    fn record(&mut self, key: impl Into<String>, value: f64) {
        self.map.insert(key.into(), value);
    }

    fn require(&mut self, ok: bool) {
        self.pass &= ok;
    }

    fn finish(self, id: ClaimId) -> ClaimResult {
        ClaimResult {
            id,
            status: if self.pass {
                ClaimStatus::Pass
            } else {
                ClaimStatus::Fail
            },
            description: id.description(),
            details: self.map,
        }
    }
}

fn max_deviation(values: &[LogValue], spec: DigitLawSpec) -> f64 {
    let freqs = digit_histogram(values, spec).frequencies();
    freqs
        .iter()
        .zip(benford_pmf(spec).probabilities())
        .map(|(f, p)| (f - p).abs())
        .fold(0.0, f64::max)
}

fn first_digit_mad(values: &[LogValue]) -> Result<f64> {
    let spec = DigitLawSpec::leading(10)?;
    mad_stat(&digit_histogram(values, spec), &benford_pmf(spec))
}

/// Checks max deviation and chi-square for one generated sample.
fn law_check(
    details: &mut Details,
    label: &str,
    values: &[LogValue],
    spec: DigitLawSpec,
) -> Result<()> {
    let dev = max_deviation(values, spec);
    let chi2 = chi_square_stat(&digit_histogram(values, spec), &benford_pmf(spec))?;
    let critical = chi_square_critical(spec.digit_count() as u32 - 1, ALPHA)?;
    details.record(format!("{label}.max_deviation"), dev);
    details.record(format!("{label}.chi_square"), chi2);
    details.record(format!("{label}.chi_square_critical"), critical);
    details.require(dev < MAX_DEVIATION && chi2 < critical);
    Ok(())
}

/// The three uniform-exponent cases, labelled and seeded.
fn gr_cases(seed: u64) -> Result<[(&'static str, ExponentIntervalSpec, u64); 3]> {
    Ok([
        ("a10_p0_m1", ExponentIntervalSpec::new(10.0, 0, 1)?, seed),
        (
            "a2_p0_m1",
            ExponentIntervalSpec::new(2.0, 0, 1)?,
            seed.wrapping_add(1),
        ),
        (
            "ae_pm3_m2",
            ExponentIntervalSpec::new(std::f64::consts::E, -3, 2)?,
            seed.wrapping_add(2),
        ),
    ])
}

fn table1() -> Result<ClaimResult> {
    let mut d = Details::new();
    let pmf = benford_pmf(DigitLawSpec::leading(10)?);
    let dev = pmf
        .probabilities()
        .iter()
        .zip(FIRST_DIGIT_TABLE)
        .map(|(p, t)| (p - t).abs())
        .fold(0.0, f64::max);
    d.record("max_deviation", dev);
    d.require(dev < 5e-5);
    Ok(d.finish(ClaimId::Table1))
}

fn gr_uniform(seed: u64) -> Result<ClaimResult> {
    let mut d = Details::new();
    let spec = DigitLawSpec::leading(10)?;
    for (label, interval, case_seed) in gr_cases(seed)? {
        let values = gen_power_sequence(&interval, GR_SAMPLES, case_seed)?;
        law_check(&mut d, label, &values, spec)?;
    }
    Ok(d.finish(ClaimId::GrUniform))
}

fn scale_invariance(seed: u64) -> Result<ClaimResult> {
    let mut d = Details::new();
    let spec = DigitLawSpec::leading(10)?;
    let values = gen_power_sequence(&ExponentIntervalSpec::new(10.0, 0, 1)?, GR_SAMPLES, seed)?;
    let base = conformance_report(&values, spec, ALPHA)?;
    d.record("unscaled_chi_square", base.chi_square);
    d.require(base.verdict == Verdict::Conforming);

    let mut conforming = 0usize;
    let mut worst = 0.0f64;
    for u in uniform_unit_samples(SCALE_TRIALS, seed.wrapping_add(1)) {
        let c = 10f64.powf(2.0 * u - 1.0);
        let report = conformance_report(&scale_sequence(&values, c)?, spec, ALPHA)?;
        worst = worst.max(report.chi_square);
        if report.verdict == Verdict::Conforming {
            conforming += 1;
        }
    }
    d.record("trials", SCALE_TRIALS as f64);
    d.record("conforming_trials", conforming as f64);
    d.record("max_scaled_chi_square", worst);
    d.record("chi_square_critical", base.chi_square_critical);
    d.require(conforming >= SCALE_MIN_CONFORMING);
    Ok(d.finish(ClaimId::ScaleInvariance))
}

fn base_invariance(seed: u64) -> Result<ClaimResult> {
    let mut d = Details::new();
    let interval = ExponentIntervalSpec::with_number_base(3.0, 0, 1, 8)?;
    let values = gen_power_sequence(&interval, GR_SAMPLES, seed)?;
    law_check(&mut d, "a3_base8", &values, DigitLawSpec::leading(8)?)?;
    Ok(d.finish(ClaimId::BaseInvariance))
}

fn product_mad(lo: f64, hi: f64, factors: u32, seed: u64) -> Result<f64> {
    let spec = ProductSpec::new(
        SourceDistribution::uniform_interval(lo, hi)?,
        factors,
        PRODUCT_SAMPLES,
        seed,
    )?;
    first_digit_mad(&gen_product_samples(&spec))
}

fn product_m_small(seed: u64) -> Result<ClaimResult> {
    let mut d = Details::new();
    let wide = product_mad(1.0, 10.0, 5, seed)?;
    let narrow = product_mad(5.0, 6.0, 10, seed.wrapping_add(1))?;
    d.record("uniform_1_10_m5.mad", wide);
    d.record("uniform_5_6_m10.mad", narrow);
    d.require(wide < MAD_CONVERGED && narrow > MAD_NOT_CONVERGED);
    Ok(d.finish(ClaimId::ProductMSmall))
}

fn product_m_large(seed: u64) -> Result<ClaimResult> {
    let mut d = Details::new();
    let mad = product_mad(5.0, 6.0, 400, seed)?;
    d.record("uniform_5_6_m400.mad", mad);
    d.require(mad < MAD_CONVERGED);
    Ok(d.finish(ClaimId::ProductMLarge))
}

fn sigma_flatness() -> Result<ClaimResult> {
    let mut d = Details::new();
    let one = wrapped_gaussian_flatness(1.0)?;
    let ten = wrapped_gaussian_flatness(10.0)?;
    let narrow = wrapped_gaussian_flatness(0.3)?;
    d.record("sigma_1", one);
    d.record("sigma_10", ten);
    d.record("sigma_0.3", narrow);
    d.require(one < 5e-8 && ten < 1e-12 && ((narrow - 0.338) / 0.338).abs() < 0.1);
    Ok(d.finish(ClaimId::SigmaFlatness))
}

fn geoseq_fig3(seed: u64) -> Result<ClaimResult> {
    let mut d = Details::new();
    let spec = GeometricSeqSpec::new(1.0, 9.9, GEOMETRIC_TERMS, seed, GeometricMode::FreshFactors)?;
    let report = conformance_report(
        &gen_geometric_sequence(&spec),
        DigitLawSpec::leading(10)?,
        ALPHA,
    )?;
    d.record("decades_spanned", report.decades_spanned);
    d.record("ks_mantissa", report.ks_mantissa);
    d.record("chi_square", report.chi_square);
    d.record("chi_square_critical", report.chi_square_critical);
    d.require(
        report.decades_spanned > 40.0
            && report.ks_mantissa < GEOMETRIC_KS
            && report.chi_square < report.chi_square_critical,
    );
    Ok(d.finish(ClaimId::GeoseqFig3))
}

fn deep_digit_uniformity() -> Result<ClaimResult> {
    let mut d = Details::new();
    let pmf = benford_pmf(DigitLawSpec::new(10, 4)?);
    let dev = pmf
        .probabilities()
        .iter()
        .map(|p| (p - 0.1).abs())
        .fold(0.0, f64::max);
    d.record("max_deviation_from_uniform", dev);
    d.require(dev < 0.001);
    Ok(d.finish(ClaimId::DeepDigitUniformity))
}

/// Runs one claim with seeds derived from `seed`.
pub fn run_claim(id: ClaimId, seed: u64) -> Result<ClaimResult> {
    let s = seed.wrapping_add(id.seed_offset());
    match id {
        ClaimId::Table1 => table1(),
        ClaimId::GrUniform => gr_uniform(s),
        ClaimId::ScaleInvariance => scale_invariance(s),
        ClaimId::BaseInvariance => base_invariance(s),
        ClaimId::ProductMSmall => product_m_small(s),
        ClaimId::ProductMLarge => product_m_large(s),
        ClaimId::SigmaFlatness => sigma_flatness(),
        ClaimId::GeoseqFig3 => geoseq_fig3(s),
        ClaimId::DeepDigitUniformity => deep_digit_uniformity(),
    }
}

/// Runs `ids` in order; duplicates are kept.
pub fn run_claims(ids: &[ClaimId], seed: u64) -> Result<ReproduceRun> {
    let claims = ids
        .iter()
        .map(|&id| run_claim(id, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReproduceRun { seed, claims })
}

pub fn run_all(seed: u64) -> Result<ReproduceRun> {
    run_claims(&ClaimId::ALL, seed)
}
