//! Seeded generators for the three Benford-conforming sequence families:
//! powers `a^R` with uniform exponents, products of `M` random factors, and
//! generalized geometric sequences. All output is in log domain.

use std::f64::consts::LN_10;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain_err, spec_err, Result};
use crate::log_value::LogValue;
use crate::rng::{self, CHUNK_LEN};

/// Exponents `R` drawn uniformly from `[P log_a K, (P + M) log_a K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentIntervalSpec {
    base_of_power: f64,
    decade_offset: i64,
    width: u32,
    number_base: u32,
}

impl ExponentIntervalSpec {
    /// Interval in base 10.
    pub fn new(base_of_power: f64, decade_offset: i64, width: u32) -> Result<Self> {
        Self::with_number_base(base_of_power, decade_offset, width, 10)
    }

    pub fn with_number_base(
        base_of_power: f64,
        decade_offset: i64,
        width: u32,
        number_base: u32,
    ) -> Result<Self> {
        if base_of_power <= 0.0 || !base_of_power.is_finite() || base_of_power == 1.0 {
            return spec_err(format!(
                "power base must be positive, finite and not 1, got {base_of_power}"
            ));
        }
        if width == 0 {
            return spec_err("interval width multiplier must be at least 1");
        }
        if number_base < 2 {
            return spec_err(format!("number base must be at least 2, got {number_base}"));
        }
        Ok(Self {
            base_of_power,
            decade_offset,
            width,
            number_base,
        })
    }

    pub fn base_of_power(&self) -> f64 {
        self.base_of_power
    }

    pub fn decade_offset(&self) -> i64 {
        self.decade_offset
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn number_base(&self) -> u32 {
        self.number_base
    }

    /// `[P log_a K, (P + M) log_a K)`. For `a < 1` the lower end is the larger number.
    pub fn exponent_interval(&self) -> (f64, f64) {
        let log_a_k = f64::from(self.number_base).ln() / self.base_of_power.ln();
        let start = self.decade_offset as f64;
        (start * log_a_k, (start + f64::from(self.width)) * log_a_k)
    }

    /// Range of the generated `log10` values: `[P log10 K, (P + M) log10 K)`.
    pub fn log10_range(&self) -> (f64, f64) {
        let log10_k = f64::from(self.number_base).log10();
        let start = self.decade_offset as f64;
        (start * log10_k, (start + f64::from(self.width)) * log10_k)
    }
}

/// Where the random factors of a product come from. Support is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    UniformInterval { lo: f64, hi: f64 },
    ExplicitList { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SourceKind", into = "SourceKind")]
pub struct SourceDistribution(SourceKind);

impl SourceDistribution {
    /// Uniform on `[lo, hi)`; `lo == hi` is a point mass.
    pub fn uniform_interval(lo: f64, hi: f64) -> Result<Self> {
        if lo <= 0.0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
            return spec_err(format!(
                "uniform source needs 0 < lo <= hi < inf, got [{lo}, {hi})"
            ));
        }
        Ok(Self(SourceKind::UniformInterval { lo, hi }))
    }

    /// Draws uniformly among the listed values.
    pub fn explicit_list(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return spec_err("explicit source list is empty");
        }
        if let Some(bad) = values.iter().find(|v| **v <= 0.0 || !v.is_finite()) {
            return spec_err(format!(
                "source values must be positive and finite, got {bad}"
            ));
        }
        Ok(Self(SourceKind::ExplicitList { values }))
    }

    /// Point mass at `x`.
    pub fn point_mass(x: f64) -> Result<Self> {
        Self::uniform_interval(x, x)
    }

    pub fn kind(&self) -> &SourceKind {
        &self.0
    }

    fn log_sampler(&self) -> LogSampler {
        match &self.0 {
            SourceKind::UniformInterval { lo, hi } => LogSampler::Uniform { lo: *lo, hi: *hi },
            SourceKind::ExplicitList { values } => {
                LogSampler::List(values.iter().map(|v| v.log10()).collect())
            }
        }
    }
}

impl TryFrom<SourceKind> for SourceDistribution {
    type Error = crate::BenfordError;

    fn try_from(kind: SourceKind) -> Result<Self> {
        match kind {
            SourceKind::UniformInterval { lo, hi } => Self::uniform_interval(lo, hi),
            SourceKind::ExplicitList { values } => Self::explicit_list(values),
        }
    }
}

impl From<SourceDistribution> for SourceKind {
    fn from(source: SourceDistribution) -> Self {
        source.0
    }
}

enum LogSampler {
    Uniform { lo: f64, hi: f64 },
    List(Vec<f64>),
}

impl LogSampler {
    #[inline]
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            LogSampler::Uniform { lo, hi } => rng::uniform(rng, *lo, *hi).log10(),
            LogSampler::List(logs) => {
                let idx = (rng::unit_f64(rng) * logs.len() as f64) as usize;
                logs[idx.min(logs.len() - 1)]
            }
        }
    }
}

/// Mean and standard deviation of `log10` of the source draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedLogMoments {
    pub c0: f64,
    pub sigma0: f64,
}

impl DerivedLogMoments {
    /// Predicted centre of `log10` of an `M`-factor product.
    pub fn product_mean(&self, factors: u32) -> f64 {
        f64::from(factors) * self.c0
    }

    /// Predicted spread of `log10` of an `M`-factor product.
    pub fn product_sigma(&self, factors: u32) -> f64 {
        f64::from(factors).sqrt() * self.sigma0
    }
}

/// Exact log-moments for uniform sources, sample moments for lists.
pub fn derive_log_moments(source: &SourceDistribution) -> DerivedLogMoments {
    match source.kind() {
        SourceKind::UniformInterval { lo, hi } => {
            let (lo, hi) = (*lo, *hi);
            if hi == lo {
                return DerivedLogMoments {
                    c0: lo.log10(),
                    sigma0: 0.0,
                };
            }
            let width = hi - lo;
            // Antiderivatives of ln x and of (ln x - c)^2.
            let first = |x: f64| x * x.ln() - x;
            let mean_ln = (first(hi) - first(lo)) / width;
            let second = |x: f64| {
                let t = x.ln() - mean_ln;
                x * (t * t - 2.0 * t + 2.0)
            };
            let var_ln = ((second(hi) - second(lo)) / width).max(0.0);
            DerivedLogMoments {
                c0: mean_ln / LN_10,
                sigma0: var_ln.sqrt() / LN_10,
            }
        }
        SourceKind::ExplicitList { values } => {
            let n = values.len() as f64;
            let logs: Vec<f64> = values.iter().map(|v| v.log10()).collect();
            let mean = logs.iter().sum::<f64>() / n;
            let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
            DerivedLogMoments {
                c0: mean,
                sigma0: var.sqrt(),
            }
        }
    }
}

/// `N` products of `M` independent factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSpec {
    source: SourceDistribution,
    num_factors: u32,
    num_samples: usize,
    seed: u64,
}

impl ProductSpec {
    pub fn new(
        source: SourceDistribution,
        num_factors: u32,
        num_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        if num_factors == 0 {
            return spec_err("a product needs at least one factor");
        }
        if num_samples == 0 {
            return spec_err("at least one sample must be requested");
        }
        Ok(Self {
            source,
            num_factors,
            num_samples,
            seed,
        })
    }

    pub fn source(&self) -> &SourceDistribution {
        &self.source
    }

    pub fn num_factors(&self) -> u32 {
        self.num_factors
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometricMode {
    /// Term `J` is a product of `J` fresh factors.
    #[default]
    FreshFactors,
    /// Term `J` is term `J - 1` times one more factor.
    Cumulative,
}

/// Generalized geometric sequence with factors uniform on `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricSeqSpec {
    interval_lo: f64,
    interval_hi: f64,
    length: usize,
    seed: u64,
    mode: GeometricMode,
}

impl GeometricSeqSpec {
    pub fn new(
        interval_lo: f64,
        interval_hi: f64,
        length: usize,
        seed: u64,
        mode: GeometricMode,
    ) -> Result<Self> {
        if interval_lo <= 0.0
            || !interval_lo.is_finite()
            || !interval_hi.is_finite()
            || interval_hi < interval_lo
        {
            return spec_err(format!(
                "factor interval needs 0 < lo <= hi < inf, got [{interval_lo}, {interval_hi}]"
            ));
        }
        if length == 0 {
            return spec_err("sequence length must be at least 1");
        }
        Ok(Self {
            interval_lo,
            interval_hi,
            length,
            seed,
            mode,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.interval_lo, self.interval_hi)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> GeometricMode {
        self.mode
    }
}

/// Any of the three generator families with everything needed to run it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    Power {
        interval: ExponentIntervalSpec,
        n: usize,
        seed: u64,
    },
    Product(ProductSpec),
    Geometric(GeometricSeqSpec),
}

impl SequenceSpec {
    pub fn generate(&self) -> Result<Vec<LogValue>> {
        match self {
            SequenceSpec::Power { interval, n, seed } => gen_power_sequence(interval, *n, *seed),
            SequenceSpec::Product(spec) => Ok(gen_product_samples(spec)),
            SequenceSpec::Geometric(spec) => Ok(gen_geometric_sequence(spec)),
        }
    }
}

fn fill_chunked<F>(n: usize, seed: u64, draw: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let mut out = vec![0.0; n];
    out.par_chunks_mut(CHUNK_LEN)
        .enumerate()
        .for_each(|(chunk, slots)| {
            let mut rng = rng::stream(seed, chunk as u64);
            for slot in slots {
                *slot = draw(&mut rng);
            }
        });
    out
}

/// The raw uniform exponents `R_i` behind [`gen_power_sequence`].
pub fn power_exponents(spec: &ExponentIntervalSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return spec_err("at least one sample must be requested");
    }
    let (start, end) = spec.exponent_interval();
    let span = end - start;
    Ok(fill_chunked(n, seed, |rng| {
        start + rng::unit_f64(rng) * span
    }))
}

/// `log10(a^R_i) = R_i log10 a` for uniform exponents. All values lie in
/// `[P log10 K, (P + M) log10 K)`.
pub fn gen_power_sequence(
    spec: &ExponentIntervalSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<LogValue>> {
    let exponents = power_exponents(spec, n, seed)?;
    let log10_a = spec.base_of_power().log10();
    let (low, high) = spec.log10_range();
    let top = high.next_down();
    Ok(exponents
        .into_iter()
        .map(|r| LogValue::new_unchecked((r * log10_a).clamp(low, top)))
        .collect())
}

/// Each sample is the sum of `M` independent `log10` draws from the source.
pub fn gen_product_samples(spec: &ProductSpec) -> Vec<LogValue> {
    let sampler = spec.source.log_sampler();
    let factors = spec.num_factors;
    fill_chunked(spec.num_samples, spec.seed, |rng| {
        let mut acc = 0.0;
        for _ in 0..factors {
            acc += sampler.draw(rng);
        }
        acc
    })
    .into_iter()
    .map(LogValue::new_unchecked)
    .collect()
}

/// Terms `Z^(1), ..., Z^(N)` in log domain.
///
/// In fresh-factor mode term `J` draws its own `J` factors from stream `J`
/// (O(N^2) draws); in cumulative mode a single running product is extended
/// by one factor per term.
pub fn gen_geometric_sequence(spec: &GeometricSeqSpec) -> Vec<LogValue> {
    let sampler = LogSampler::Uniform {
        lo: spec.interval_lo,
        hi: spec.interval_hi,
    };
    let terms: Vec<f64> = match spec.mode {
        GeometricMode::FreshFactors => (1..=spec.length)
            .into_par_iter()
            .map(|term| {
                let mut rng = rng::stream(spec.seed, term as u64);
                let mut acc = 0.0;
                for _ in 0..term {
                    acc += sampler.draw(&mut rng);
                }
                acc
            })
            .collect(),
        GeometricMode::Cumulative => {
            let mut rng = rng::stream(spec.seed, 0);
            let mut acc = 0.0;
            (0..spec.length)
                .map(|_| {
                    acc += sampler.draw(&mut rng);
                    acc
                })
                .collect()
        }
    };
    terms.into_iter().map(LogValue::new_unchecked).collect()
}

/// Multiplies every value by `c` (adds `log10 c`).
pub fn scale_sequence(values: &[LogValue], c: f64) -> Result<Vec<LogValue>> {
    if c <= 0.0 || !c.is_finite() {
        return domain_err(format!("scale factor must be positive and finite, got {c}"));
    }
    let shift = c.log10();
    values
        .iter()
        .map(|v| LogValue::new(v.log10() + shift))
        .collect()
}

/// Draws `n` numbers in `[0, 1)` from stream 0 of `seed`; handy for tests
/// that need uniform mantissas directly.
pub fn uniform_unit_samples(n: usize, seed: u64) -> Vec<f64> {
    fill_chunked(n, seed, rng::unit_f64)
}
