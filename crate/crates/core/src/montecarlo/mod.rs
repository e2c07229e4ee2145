//! Seeded streams, stationary lag-covariance estimates and the null simulator.

mod lag;
mod stream;

pub use lag::{estimate_sigma_m, WindowFunction};
pub(crate) use lag::{batch_ranges, batched, exact_mean, LagSums, Windows};
pub use stream::{exponential_from_uniform, mix64, SeededStream};

use alloc::vec::Vec;

use crate::asymptotics::{null_moments, standardize, AsymptoticMoments, PerTermMoments};
use crate::error::{Error, Result};
use crate::spacings::{validate_order, CircularSample};
use crate::specfun::normal_cdf;
use crate::statistics::{evaluate, StatisticKind, StatisticResult, Variant};
use crate::sum::Accumulator;

/// Number of batches behind every batch-means standard error.
pub const BATCHES: usize = 32;

/// Minimum draw count for stream-based estimators.
pub const MIN_DRAWS: usize = 10_000;

/// A Monte Carlo estimate with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    /// `|value − target| ≤ k·se`.
    pub fn within_se(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.se
    }
}

/// Standard error of the mean of per-batch estimates.
pub(crate) fn batch_se(per_batch: &[f64]) -> f64 {
    let b = per_batch.len() as f64;
    if per_batch.len() < 2 {
        return f64::NAN;
    }
    let mean = exact_mean(per_batch);
    let ss: f64 = per_batch.iter().map(|v| (v - mean) * (v - mean)).sum();
    libm::sqrt(ss / (b - 1.0) / b)
}

/// One null-simulation setup.
#[derive(Debug, Clone, Copy)]
pub struct McConfig<'a> {
    /// Arc count; each replication draws `n − 1` uniforms.
    pub n: usize,
    pub m: usize,
    pub kind: StatisticKind<'a>,
    pub variant: Variant,
    pub replications: usize,
    pub seed: u64,
    /// Per-summand null moments; required for custom kinds, overrides the
    /// closed forms otherwise.
    pub moments: Option<PerTermMoments>,
}

impl<'a> McConfig<'a> {
    pub fn new(n: usize, m: usize, kind: StatisticKind<'a>, replications: usize, seed: u64) -> Self {
        Self { n, m, kind, variant: Variant::V, replications, seed, moments: None }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_moments(mut self, moments: PerTermMoments) -> Self {
        self.moments = Some(moments);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig("n must be at least 2"));
        }
        validate_order(self.m, self.n)?;
        if self.replications < 2 {
            return Err(Error::InvalidConfig("at least two replications are required"));
        }
        if self.variant == Variant::R {
            return Err(Error::InvalidConfig("the R variant cannot be simulated from a kind"));
        }
        Ok(())
    }

    /// Null moments used to standardise every replication.
    pub fn null_moments(&self) -> Result<AsymptoticMoments> {
        match (self.moments, self.kind.named()) {
            (Some(per_term), _) => Ok(per_term.scaled(self.variant.summand_count(self.n, self.m))),
            (None, Some(named)) => null_moments(named, self.variant, self.n, self.m),
            (None, None) => Err(Error::UnsupportedKind),
        }
    }
}

/// Statistic of replication `replication`, drawn from stream `(seed, replication)`.
pub fn replicate_statistic(config: &McConfig<'_>, replication: usize) -> Result<StatisticResult> {
    let mut stream = SeededStream::new(config.seed, replication as u64);
    let draws = stream.uniform_sorted(config.n - 1);
    let sample = CircularSample::from_unit_observations(&draws)?;
    evaluate(&sample, config.m, config.kind, config.variant).map_err(|e| e.in_replication(replication))
}

/// Standardised statistic of one replication.
pub fn replication_z(
    config: &McConfig<'_>,
    moments: &AsymptoticMoments,
    replication: usize,
) -> Result<f64> {
    let result = replicate_statistic(config, replication)?;
    Ok(standardize(&result, moments).map_err(|e| e.in_replication(replication))?.z)
}

/// Summary of standardised replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSummary {
    pub replications: usize,
    pub mean: f64,
    pub variance: f64,
    /// `sup_x |F_R(x) − Φ(x)|`
    pub ks_distance: f64,
    pub min_z: f64,
    pub max_z: f64,
    pub seed: u64,
}

/// Kolmogorov–Smirnov distance between the empirical distribution of `z`
/// and the standard normal, checked on both sides of every jump.
pub fn ks_distance(z: &[f64]) -> f64 {
    let mut sorted = z.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let r = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d: f64, (i, &x)| {
        let f = normal_cdf(x);
        d.max((i + 1) as f64 / r - f).max(f - i as f64 / r)
    })
}

/// Mean, variance (divisor `R − 1`), KS distance and range of `z`, reduced in
/// index order.
pub fn summarize(z: &[f64], seed: u64) -> McSummary {
    let r = z.len();
    let mean = z.iter().copied().collect::<Accumulator>().value() / r as f64;
    let variance = if r > 1 {
        z.iter().map(|v| (v - mean) * (v - mean)).collect::<Accumulator>().value() / (r - 1) as f64
    } else {
        0.0
    };
    McSummary {
        replications: r,
        mean,
        variance,
        ks_distance: ks_distance(z),
        min_z: z.iter().copied().fold(f64::INFINITY, f64::min),
        max_z: z.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        seed,
    }
}

/// Simulates `R` null replications and summarises their z-scores.
///
/// Each replication uses its own stream, so the per-replication values do not
/// depend on evaluation order; callers may compute [`replication_z`] in
/// parallel and pass the index-ordered results to [`summarize`].
pub fn simulate_null(config: &McConfig<'_>) -> Result<McSummary> {
    let z = simulate_z(config)?;
    Ok(summarize(&z, config.seed))
}

/// All standardised replications in index order.
pub fn simulate_z(config: &McConfig<'_>) -> Result<Vec<f64>> {
    config.validate()?;
    let moments = config.null_moments()?;
    (0..config.replications).map(|r| replication_z(config, &moments, r)).collect()
}

/// Monte Carlo mean of the raw statistic with a batch-means error.
pub fn simulate_mean(config: &McConfig<'_>) -> Result<Estimate> {
    config.validate()?;
    let values: Vec<f64> = (0..config.replications)
        .map(|r| replicate_statistic(config, r).map(|s| s.value))
        .collect::<Result<_>>()?;
    Ok(mean_estimate(&values))
}

/// Sample mean with its standard error `sd/√R`.
pub fn mean_estimate(values: &[f64]) -> Estimate {
    let r = values.len() as f64;
    let mean = exact_mean(values);
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).collect::<Accumulator>().value();
    Estimate { value: mean, se: libm::sqrt(ss / (r - 1.0) / r) }
}
