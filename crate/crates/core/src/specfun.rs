//! Special functions behind the closed-form null moments.
//!
//! Only integer shifts are needed for the digamma and Hurwitz zeta values, so
//! both are evaluated by finite sums with an asymptotic tail rather than by
//! general real-argument algorithms.

use crate::error::{Error, Result};

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Below this argument the digamma value is the harmonic sum itself.
const DIGAMMA_SERIES_FROM: u64 = 64;

/// Smallest cutoff at which the ζ(2, ·) tail is replaced by its expansion.
const ZETA_TAIL_CUTOFF: u64 = 1024;

/// Stirling series is used for `x` at or above this value.
const LGAMMA_STIRLING_FROM: f64 = 16.0;

/// ψ(m) = H_{m-1} − γ for integer `m ≥ 1`.
pub fn digamma_int(m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::NonPositiveArgument(0.0));
    }
    if m < DIGAMMA_SERIES_FROM {
        Ok(harmonic(m - 1) - EULER_GAMMA)
    } else {
        Ok(digamma_asymptotic(m as f64))
    }
}

/// H_k summed from the smallest term upwards.
fn harmonic(k: u64) -> f64 {
    (1..=k).rev().fold(0.0, |acc, j| acc + 1.0 / j as f64)
}

fn digamma_asymptotic(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    // Bernoulli tail: B_2k / (2k x^2k), k = 1..5
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    libm::log(x) - 0.5 / x - tail
}

/// ζ(2, m) = Σ_{j ≥ m} j⁻² for integer `m ≥ 1`.
///
/// Direct summation up to a cutoff `J ≥ 1024`, then the Euler–Maclaurin tail
/// `1/J + 1/(2J²) + 1/(6J³) − 1/(30J⁵) + 1/(42J⁷)`.
pub fn hurwitz_zeta2(m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::NonPositiveArgument(0.0));
    }
    let cutoff = m.max(ZETA_TAIL_CUTOFF);
    let j = cutoff as f64;
    let inv = 1.0 / j;
    let inv2 = inv * inv;
    let tail = inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0))));
    let head = (m..cutoff).rev().fold(0.0, |acc, k| {
        let k = k as f64;
        acc + 1.0 / (k * k)
    });
    Ok(tail + head)
}

/// ln Γ(x) for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x >= LGAMMA_STIRLING_FROM {
        return Ok(stirling(x));
    }
    // Γ(x) = Γ(x + k) / (x (x+1) … (x+k−1))
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < LGAMMA_STIRLING_FROM {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - libm::log(product))
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    (x - 0.5) * libm::log(x) - x + 0.5 * LN_2PI + series
}

/// Standard normal distribution function Φ(z).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * core::f64::consts::FRAC_1_SQRT_2)
}

/// Upper tail 1 − Φ(z), without cancellation for large `z`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * core::f64::consts::FRAC_1_SQRT_2)
}

/// μ_n = 2π √n n^{n−1} e^{−n} / (n−1)!, evaluated in log space.
///
/// Tends to √(2π) from below with a relative deficit close to 1/(12n).
pub fn mu_n(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::ArgumentTooSmall { got: n, min: 2 });
    }
    let nf = n as f64;
    let ln_n = libm::log(nf);
    let log_mu = LN_2PI + 0.5 * ln_n + (nf - 1.0) * ln_n - nf - log_gamma(nf)?;
    Ok(libm::exp(log_mu))
}
