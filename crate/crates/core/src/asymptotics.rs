//! Null moments of spacings sums: exact closed forms for the named
//! statistics, standardisation, and Monte Carlo estimators of the general
//! mean and variance expressions over exponential windows.
//!
//! Under the null the scaled spacings behave like iid standard exponentials
//! `X_k` conditioned on their total. The unconditional window moments plus a
//! covariance correction against the window total `|X_k^m|` give the
//! asymptotic mean and variance of every sum in [`crate::statistics`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::montecarlo::{
    batch_ranges, batch_se, batched, exact_mean, Estimate, LagSums, SeededStream, WindowFunction,
    Windows, BATCHES, MIN_DRAWS,
};
use crate::spacings::validate_order;
use crate::specfun::{digamma_int, hurwitz_zeta2, normal_cdf, normal_sf};
use crate::statistics::{
    KindLabel, NamedStatistic, StatisticKind, StatisticResult, TupleFunctionFamily, Variant,
};

/// Null mean and variance of one summand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerTermMoments {
    pub mean: f64,
    pub variance: f64,
}

impl PerTermMoments {
    /// Moments of a sum of `summands` such terms.
    pub fn scaled(self, summands: usize) -> AsymptoticMoments {
        let k = summands as f64;
        AsymptoticMoments {
            mean: k * self.mean,
            variance: k * self.variance,
            per_term_mean: self.mean,
            per_term_variance: self.variance,
            summands,
        }
    }
}

/// Asymptotic null mean and variance of a statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticMoments {
    pub mean: f64,
    pub variance: f64,
    pub per_term_mean: f64,
    pub per_term_variance: f64,
    pub summands: usize,
}

/// `2m(m+1)(2m+1)/3`, exact in integer arithmetic before the final rounding.
pub fn greenwood_sigma2(m: usize) -> f64 {
    let m = m as u128;
    (2 * m * (m + 1) * (2 * m + 1) / 3) as f64
}

/// Moran σ_m² = (2m² − 2m + 1) ζ(2, m) − 2m + 1.
///
/// The two terms cancel to about `1/(3m)`; from `m = 64` on the value comes
/// from the expansion of the same expression in `1/m`.
fn moran_sigma2(m: usize) -> f64 {
    if m < 64 {
        let mf = m as f64;
        let zeta = hurwitz_zeta2(m as u64).expect("m >= 1");
        (2.0 * mf * mf - 2.0 * mf + 1.0) * zeta - 2.0 * mf + 1.0
    } else {
        const COEFFS: [f64; 10] = [
            1.0 / 3.0,
            1.0 / 6.0,
            1.0 / 10.0,
            1.0 / 15.0,
            1.0 / 70.0,
            -1.0 / 21.0,
            -3.0 / 70.0,
            1.0 / 15.0,
            13.0 / 110.0,
            -5.0 / 33.0,
        ];
        let x = 1.0 / m as f64;
        x * COEFFS.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Entropy σ_m² = (2(m(m+1))² ζ(2, m+2) − m(m+1)(2m−1)) / 4.
fn entropy_sigma2(m: usize) -> f64 {
    let mf = m as f64;
    let mm = mf * (mf + 1.0);
    let zeta = hurwitz_zeta2(m as u64 + 2).expect("m >= 1");
    (2.0 * mm * mm * zeta - mm * (2.0 * mf - 1.0)) / 4.0
}

/// `E h(|X_0^m|)` and σ_m² for a named statistic over overlapping windows.
pub fn per_term_moments(kind: NamedStatistic, m: usize) -> PerTermMoments {
    assert!(m >= 1, "order must be positive");
    let mf = m as f64;
    let mu = m as u64;
    match kind {
        NamedStatistic::Greenwood => {
            PerTermMoments { mean: mf * (mf + 1.0), variance: greenwood_sigma2(m) }
        }
        NamedStatistic::Moran => {
            PerTermMoments { mean: digamma_int(mu).expect("m >= 1"), variance: moran_sigma2(m) }
        }
        NamedStatistic::Entropy => PerTermMoments {
            mean: mf * digamma_int(mu + 1).expect("m >= 1"),
            variance: entropy_sigma2(m),
        },
    }
}

/// Closed-form null moments of `V_{n,m}` for the named statistics.
pub fn closed_form_moments(kind: StatisticKind<'_>, n: usize, m: usize) -> Result<AsymptoticMoments> {
    let named = kind.named().ok_or(Error::UnsupportedKind)?;
    validate_order(m, n)?;
    Ok(per_term_moments(named, m).scaled(n))
}

/// Mean and variance of `h(G)` and `cov(h(G), G)` for `G ~ Gamma(m, 1)`.
fn gamma_window_moments(kind: NamedStatistic, m: usize) -> (f64, f64, f64) {
    let mf = m as f64;
    let mu = m as u64;
    let psi = |k: u64| digamma_int(k).expect("argument >= 1");
    match kind {
        NamedStatistic::Greenwood => {
            let mean = mf * (mf + 1.0);
            (mean, mean * (4.0 * mf + 6.0), 2.0 * mean)
        }
        NamedStatistic::Moran => (psi(mu), hurwitz_zeta2(mu).expect("m >= 1"), 1.0),
        NamedStatistic::Entropy => {
            let psi1 = psi(mu + 1);
            let psi2 = psi(mu + 2);
            let zeta = hurwitz_zeta2(mu + 2).expect("m >= 1");
            let mean = mf * psi1;
            let second = mf * (mf + 1.0) * (zeta + psi2 * psi2);
            (mean, second - mean * mean, mf * (1.0 + psi1))
        }
    }
}

/// Null moments of the disjoint sum `Q_{n,m}` over `L = ⌊n/m⌋` blocks:
/// mean `L·E h(G)`, variance `L·var h(G) − L²·cov²(h(G), G)/n`.
pub fn disjoint_moments(kind: NamedStatistic, n: usize, m: usize) -> Result<AsymptoticMoments> {
    validate_order(m, n)?;
    let blocks = n / m;
    let (mean, var, cov) = gamma_window_moments(kind, m);
    let l = blocks as f64;
    let variance = l * var - l * l * cov * cov / n as f64;
    Ok(AsymptoticMoments {
        mean: l * mean,
        variance,
        per_term_mean: mean,
        per_term_variance: variance / l,
        summands: blocks,
    })
}

/// Standardising moments for a named statistic and variant.
///
/// `Z` and `V` use the closed forms; `W` scales the same per-term moments by
/// its `n − m` summands; `Q` uses [`disjoint_moments`].
pub fn null_moments(kind: NamedStatistic, variant: Variant, n: usize, m: usize) -> Result<AsymptoticMoments> {
    validate_order(m, n)?;
    match variant {
        Variant::Z | Variant::V => Ok(per_term_moments(kind, m).scaled(n)),
        Variant::W => Ok(per_term_moments(kind, m).scaled(n - m)),
        Variant::Q => disjoint_moments(kind, n, m),
        Variant::R => Err(Error::UnsupportedKind),
    }
}

/// Printed leading-order forms of σ_m² for large `m`: `4m³/3`, `1/(2m²)`
/// and `(m + 5)/4`.
///
/// Only the Greenwood form tracks [`per_term_moments`]. The exact Moran
/// coefficient decays like `1/(3m)` and the exact entropy coefficient grows
/// like `m/3 + 1/4`, so the other two ratios do not tend to one.
pub fn sigma_m_closed_form_large_m(kind: StatisticKind<'_>, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    let mf = m as f64;
    match kind.named().ok_or(Error::UnsupportedKind)? {
        NamedStatistic::Greenwood => Ok(4.0 * mf * mf * mf / 3.0),
        NamedStatistic::Moran => Ok(1.0 / (2.0 * mf * mf)),
        NamedStatistic::Entropy => Ok((mf + 5.0) / 4.0),
    }
}

/// A standardised statistic with normal-reference p-values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestReport {
    pub value: f64,
    pub kind: KindLabel,
    pub variant: Variant,
    pub n: usize,
    pub m: usize,
    pub mean: f64,
    pub variance: f64,
    pub z: f64,
    /// `2(1 − Φ(|z|))`
    pub p_two_sided: f64,
    /// `Φ(z)`
    pub p_lower: f64,
    /// `1 − Φ(z)`
    pub p_upper: f64,
}

/// `z = (value − mean)/√variance` and its p-values.
pub fn standardize(result: &StatisticResult, moments: &AsymptoticMoments) -> Result<TestReport> {
    if !(moments.variance > 0.0) || !moments.variance.is_finite() {
        return Err(Error::DegenerateVariance(moments.variance));
    }
    let z = (result.value - moments.mean) / libm::sqrt(moments.variance);
    Ok(TestReport {
        value: result.value,
        kind: result.kind,
        variant: result.variant,
        n: result.n,
        m: result.m,
        mean: moments.mean,
        variance: moments.variance,
        z,
        p_two_sided: (2.0 * normal_sf(libm::fabs(z))).min(1.0),
        p_lower: normal_cdf(z),
        p_upper: normal_sf(z),
    })
}

/// Covariance of two equally long series about fixed centres, divisor = length.
fn centred_cov(a: &[f64], ca: f64, b: &[f64], cb: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - ca) * (y - cb)).sum::<f64>() / a.len() as f64
}

/// `½ cov(h(X^m), (|X^m| − m) − (|X^m| − m)²)` over iid exponential m-tuples.
///
/// This is the first-order mean correction as printed. It is not the exact
/// finite-n correction: for Greenwood at `m = 1` it gives −4 while the exact
/// mean `2n²/(n+1)` implies −2, and for Moran at `m = 1` it gives 0 where the
/// exact mean implies +1/2.
pub fn mean_correction(h: WindowFunction<'_>, m: usize, draws: usize, seed: u64) -> Result<Estimate> {
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    if draws < MIN_DRAWS {
        return Err(Error::InvalidConfig("at least 10^4 draws are required"));
    }
    let mf = m as f64;
    let mut stream = SeededStream::new(seed, 0);
    let mut tuple = vec![0.0; m];
    let mut hv = Vec::with_capacity(draws);
    let mut dv = Vec::with_capacity(draws);
    for draw in 0..draws {
        tuple.iter_mut().for_each(|x| *x = stream.exponential());
        let total: f64 = tuple.iter().sum();
        hv.push(h.eval(&tuple, total).ok_or(Error::NonFiniteSample { draw })?);
        let dev = total - mf;
        dv.push(dev - dev * dev);
    }
    let (mh, md) = (exact_mean(&hv), exact_mean(&dv));
    let value = 0.5 * centred_cov(&hv, mh, &dv, md);
    let per_batch: Vec<f64> = batch_ranges(0..draws, BATCHES)
        .map(|r| 0.5 * centred_cov(&hv[r.clone()], mh, &dv[r], md))
        .collect();
    Ok(Estimate { value, se: batch_se(&per_batch) })
}

/// Lag-averaged and corrected σ² from the same lag-covariance estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolstComparison {
    /// `Σ_j cov(h_0, h_j) − (m⁻¹ Σ_j cov(h_0, |X_j^m|))²`
    pub holst: Estimate,
    /// `Σ_j cov(h_0, h_j) − cov²(h_0, |X_0^m|)`
    pub corrected: Estimate,
    /// `holst − corrected`, with its own batch-means error.
    pub difference: Estimate,
}

/// Evaluates both variance expressions on one stream of `draws` windows.
/// At `m = 1` the two are the same number.
pub fn holst_vs_corrected(h: WindowFunction<'_>, m: usize, draws: usize, seed: u64) -> Result<HolstComparison> {
    if draws < MIN_DRAWS {
        return Err(Error::InvalidConfig("at least 10^4 draws are required"));
    }
    let w = Windows::draw(h, m, draws, seed)?;
    Ok(HolstComparison {
        holst: batched(&w, LagSums::holst),
        corrected: batched(&w, LagSums::corrected),
        difference: batched(&w, |l| l.holst() - l.corrected()),
    })
}

/// Monte Carlo estimates of `A`, `B`, `C` and `σ² = n(C − B²)` for an
/// index-dependent family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralMoments {
    /// `Σ_k E h_k(X_k^m)`
    pub a: Estimate,
    /// `n⁻¹ Σ_k cov(h_k(X_k^m), |X_k^m|)`
    pub b: Estimate,
    /// `n⁻¹ Σ_k Σ_{j=k−m+1}^{k+m−1} cov(h_k(X_k^m), h_j(X_j^m))`
    pub c: Estimate,
    /// `n(C − B²)`, unclamped.
    pub sigma2: Estimate,
    pub n: usize,
    pub m: usize,
    pub replications: usize,
}

impl GeneralMoments {
    /// Moments for standardising `R_{n,m}`; a negative σ² is clamped to 0.
    pub fn as_moments(&self) -> AsymptoticMoments {
        let n = self.n as f64;
        AsymptoticMoments {
            mean: self.a.value,
            variance: self.sigma2.value.max(0.0),
            per_term_mean: self.a.value / n,
            per_term_variance: self.sigma2.value.max(0.0) / n,
            summands: self.n,
        }
    }
}

/// Raw sums over a set of replications.
#[derive(Clone)]
struct FamilySums {
    count: usize,
    h: Vec<f64>,
    w: Vec<f64>,
    hw: Vec<f64>,
    /// `Σ h_k h_{k+j}` at `k·m + j`
    hh: Vec<f64>,
}

impl FamilySums {
    fn new(n: usize, m: usize) -> Self {
        Self { count: 0, h: vec![0.0; n], w: vec![0.0; n], hw: vec![0.0; n], hh: vec![0.0; n * m] }
    }

    fn add(&mut self, hv: &[f64], wv: &[f64], m: usize) {
        let n = hv.len();
        self.count += 1;
        for k in 0..n {
            self.h[k] += hv[k];
            self.w[k] += wv[k];
            self.hw[k] += hv[k] * wv[k];
            for j in 0..m {
                self.hh[k * m + j] += hv[k] * hv[(k + j) % n];
            }
        }
    }

    fn merge(&mut self, other: &FamilySums) {
        self.count += other.count;
        for (a, b) in [(&mut self.h, &other.h), (&mut self.w, &other.w), (&mut self.hw, &other.hw), (&mut self.hh, &other.hh)] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }

    /// `(A, B, C)` with unbiased covariances.
    fn abc(&self, m: usize) -> (f64, f64, f64) {
        let n = self.h.len();
        let c = self.count as f64;
        let cov = |sxy: f64, sx: f64, sy: f64| (sxy - sx * sy / c) / (c - 1.0);
        let a = self.h.iter().sum::<f64>() / c;
        let b = (0..n).map(|k| cov(self.hw[k], self.h[k], self.w[k])).sum::<f64>() / n as f64;
        let cc = (0..n)
            .map(|k| {
                let lag = |j: usize| cov(self.hh[k * m + j], self.h[k], self.h[(k + j) % n]);
                lag(0) + 2.0 * (1..m).map(lag).sum::<f64>()
            })
            .sum::<f64>()
            / n as f64;
        (a, b, cc)
    }
}

/// Draws `replications` circular vectors of `n` iid exponentials
/// (`X_{n+j} = X_j`) from streams `(seed, r)` and estimates `A`, `B`, `C`.
pub fn estimate_general_moments<F: TupleFunctionFamily + ?Sized>(
    family: &F,
    n: usize,
    m: usize,
    replications: usize,
    seed: u64,
) -> Result<GeneralMoments> {
    validate_order(m, n)?;
    if family.len() != n {
        return Err(Error::FamilyLengthMismatch { expected: n, got: family.len() });
    }
    if replications < 100 {
        return Err(Error::InvalidConfig("at least 100 replications are required"));
    }
    let mut batches = vec![FamilySums::new(n, m); BATCHES];
    let mut x = vec![0.0; n + m - 1];
    let mut hv = vec![0.0; n];
    let mut wv = vec![0.0; n];
    for r in 0..replications {
        let mut stream = SeededStream::new(seed, r as u64);
        for xi in x.iter_mut().take(n) {
            *xi = stream.exponential();
        }
        x.copy_within(..m - 1, n);
        for k in 0..n {
            let tuple = &x[k..k + m];
            wv[k] = tuple.iter().sum();
            hv[k] = family
                .eval(k, tuple)
                .filter(|v| v.is_finite())
                .ok_or(Error::NonFiniteSample { draw: r })?;
        }
        batches[r * BATCHES / replications].add(&hv, &wv, m);
    }
    let mut total = FamilySums::new(n, m);
    batches.iter().for_each(|b| total.merge(b));

    let nf = n as f64;
    let (a, b, c) = total.abc(m);
    let per_batch: Vec<(f64, f64, f64)> = batches.iter().map(|s| s.abc(m)).collect();
    let se_of = |f: &dyn Fn(&(f64, f64, f64)) -> f64| {
        batch_se(&per_batch.iter().map(f).collect::<Vec<_>>())
    };
    Ok(GeneralMoments {
        a: Estimate { value: a, se: se_of(&|t| t.0) },
        b: Estimate { value: b, se: se_of(&|t| t.1) },
        c: Estimate { value: c, se: se_of(&|t| t.2) },
        sigma2: Estimate { value: nf * (c - b * b), se: se_of(&|t| nf * (t.2 - t.1 * t.1)) },
        n,
        m,
        replications,
    })
}

/// `m^{r−1} / (n^{(r−2)/2} σ_m^r) · E|g(X_0^m)|^r` with
/// `g = h − E h − (X_0 − 1) cov(h, |X_0^m|)`, all moments from one stream.
///
/// Returns exactly zero when `g` vanishes identically.
pub fn clt_condition_ratio(
    h: WindowFunction<'_>,
    n: usize,
    m: usize,
    r: f64,
    draws: usize,
    seed: u64,
) -> Result<Estimate> {
    if !(r > 2.0) {
        return Err(Error::InvalidConfig("the moment order r must exceed 2"));
    }
    if draws < MIN_DRAWS {
        return Err(Error::InvalidConfig("at least 10^4 draws are required"));
    }
    validate_order(m, n)?;
    let w = Windows::draw(h, m, draws, seed)?;
    let lags = LagSums::over(&w, w.anchors.clone());
    let slope = lags.own_total();
    let abs_g_r = |t: usize| {
        let g = w.h[t] - w.mean_h - (w.first[t] - 1.0) * slope;
        libm::pow(libm::fabs(g), r)
    };
    let moment_over = |range: core::ops::Range<usize>| {
        let len = range.len() as f64;
        range.map(abs_g_r).sum::<f64>() / len
    };
    let moment = moment_over(w.anchors.clone());
    if moment == 0.0 {
        return Ok(Estimate { value: 0.0, se: 0.0 });
    }
    let sigma2 = lags.corrected();
    if !(sigma2 > 0.0) {
        return Err(Error::DegenerateVariance(sigma2));
    }
    let scale = libm::pow(m as f64, r - 1.0)
        / (libm::pow(n as f64, (r - 2.0) / 2.0) * libm::pow(sigma2, r / 2.0));
    let per_batch: Vec<f64> = w.batches().map(|b| scale * moment_over(b)).collect();
    Ok(Estimate { value: scale * moment, se: batch_se(&per_batch) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::WindowFunction;
    use crate::statistics::{Indexed, Repeated, SumOf};
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    #[test]
    fn order_one_coefficients() {
        let g = per_term_moments(NamedStatistic::Greenwood, 1);
        assert_eq!((g.mean, g.variance), (2.0, 4.0));
        let mo = per_term_moments(NamedStatistic::Moran, 1);
        assert_abs_diff_eq!(mo.mean, -0.577_215_664_901_532_9, epsilon = 1e-15);
        assert_abs_diff_eq!(mo.variance, PI * PI / 6.0 - 1.0, epsilon = 1e-13);
        let en = per_term_moments(NamedStatistic::Entropy, 1);
        assert_abs_diff_eq!(en.mean, 0.422_784_335_098_467_1, epsilon = 1e-15);
        assert_abs_diff_eq!(en.variance, PI * PI / 3.0 - 3.0, epsilon = 1e-13);
    }

    #[test]
    fn coefficients_against_high_precision_values() {
        let moran = [(2, 0.224_670_334_241_132_2), (5, 0.074_241_185_221_728_34), (100, 0.003_350_100_668_047_197), (1000, 3.335_001_000_666_809e-4)];
        for (m, want) in moran {
            let got = per_term_moments(NamedStatistic::Moran, m).variance;
            assert!(((got - want) / want).abs() < 1e-10, "moran m={m}: {got}");
        }
        let entropy = [(2, 0.608_813_203_268_075_9), (5, 1.595_330_081_701_896), (10, 3.256_330_874_198_764), (1000, 333.250_066_633_328_6)];
        for (m, want) in entropy {
            let got = per_term_moments(NamedStatistic::Entropy, m).variance;
            assert!(((got - want) / want).abs() < 1e-9, "entropy m={m}: {got}");
        }
    }

    #[test]
    fn moran_series_joins_closed_form() {
        let mf = 64.0;
        let zeta = hurwitz_zeta2(64).unwrap();
        let direct = (2.0 * mf * mf - 2.0 * mf + 1.0) * zeta - 2.0 * mf + 1.0;
        assert!(((moran_sigma2(64) - direct) / direct).abs() < 1e-10);
    }

    #[test]
    fn greenwood_exact_integer() {
        for m in 1..=1000usize {
            let exact = 2 * m as u128 * (m as u128 + 1) * (2 * m as u128 + 1);
            assert_eq!(exact % 3, 0);
            assert_eq!(greenwood_sigma2(m), (exact / 3) as f64);
            let cf = closed_form_moments(StatisticKind::Greenwood, 5000, m).unwrap();
            assert_eq!(cf.variance, 5000.0 * (exact / 3) as f64);
        }
    }

    #[test]
    fn variances_positive() {
        for m in (1..2000).chain([10_000, 100_000, 1_000_000]) {
            for kind in NamedStatistic::ALL {
                let v = closed_form_moments(kind.into(), m + 1, m).unwrap().variance;
                assert!(v > 0.0 && v.is_finite(), "{kind:?} m={m}: {v}");
            }
        }
    }

    #[test]
    fn closed_form_errors() {
        let f = |u: f64| u;
        assert_eq!(closed_form_moments(StatisticKind::CustomSum(&f), 10, 1), Err(Error::UnsupportedKind));
        assert_eq!(closed_form_moments(StatisticKind::Moran, 3, 3), Err(Error::OrderTooLarge { m: 3, n: 3 }));
    }

    #[test]
    fn large_m_forms() {
        assert_abs_diff_eq!(sigma_m_closed_form_large_m(StatisticKind::Greenwood, 10).unwrap(), 4000.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sigma_m_closed_form_large_m(StatisticKind::Moran, 10).unwrap(), 0.005, epsilon = 1e-15);
        assert_abs_diff_eq!(sigma_m_closed_form_large_m(StatisticKind::Entropy, 10).unwrap(), 3.75, epsilon = 1e-15);
        assert_eq!(greenwood_sigma2(10), 1540.0);
        let ratio = |m: usize| greenwood_sigma2(m) / sigma_m_closed_form_large_m(StatisticKind::Greenwood, m).unwrap();
        assert!((ratio(10_000) - 1.0).abs() < 1e-3);
        assert!((ratio(10_000) - 1.0).abs() < (ratio(100) - 1.0).abs());
        // exact Moran coefficient is ~1/(3m), not the printed 1/(2m²)
        let m = 10_000;
        let exact = per_term_moments(NamedStatistic::Moran, m).variance;
        assert!((exact * 3.0 * m as f64 - 1.0).abs() < 1e-3);
        let f = |u: f64| u;
        assert_eq!(sigma_m_closed_form_large_m(StatisticKind::CustomSum(&f), 3), Err(Error::UnsupportedKind));
    }

    #[test]
    fn disjoint_order_one_matches_overlapping() {
        for kind in NamedStatistic::ALL {
            let q = disjoint_moments(kind, 100, 1).unwrap();
            let v = per_term_moments(kind, 1).scaled(100);
            assert_abs_diff_eq!(q.mean, v.mean, epsilon = 1e-12);
            assert!((q.variance - v.variance).abs() < 1e-12 * v.variance.abs().max(1.0) * 10.0, "{kind:?}");
        }
        let g = disjoint_moments(NamedStatistic::Greenwood, 10, 2).unwrap();
        assert_eq!(g.summands, 5);
        assert_abs_diff_eq!(g.per_term_variance, 2.0 * 2.0 * 3.0, epsilon = 1e-12);
    }

    fn report(value: f64, n: usize) -> TestReport {
        let result = StatisticResult { value, kind: KindLabel::Greenwood, variant: Variant::V, n, m: 1, summand_count: n };
        standardize(&result, &closed_form_moments(StatisticKind::Greenwood, n, 1).unwrap()).unwrap()
    }

    #[test]
    fn standardize_examples() {
        let r = report(4.8, 4);
        assert_abs_diff_eq!(r.z, -0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(r.p_two_sided, 0.423_710_797_166_793_3, epsilon = 1e-12);
        let r = report(8.0, 4);
        assert_eq!((r.z, r.p_two_sided), (0.0, 1.0));
        let r = report(12.0, 4);
        assert_eq!(r.z, 1.0);
        assert_abs_diff_eq!(r.p_two_sided, 0.317_310_507_862_914_1, epsilon = 1e-12);
        assert_abs_diff_eq!(r.p_lower + r.p_upper, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn standardize_rejects_degenerate() {
        let result = StatisticResult { value: 1.0, kind: KindLabel::CustomSum, variant: Variant::V, n: 4, m: 1, summand_count: 4 };
        let moments = PerTermMoments { mean: 0.0, variance: 0.0 }.scaled(4);
        assert_eq!(standardize(&result, &moments), Err(Error::DegenerateVariance(0.0)));
    }

    #[test]
    fn mean_correction_examples() {
        let sq = |u: f64| u * u;
        let est = mean_correction(WindowFunction::Sum(&sq), 1, 400_000, 21).unwrap();
        assert!(est.within_se(-4.0, 3.0), "{est:?}");
        let ln = |u: f64| libm::log(u);
        let est = mean_correction(WindowFunction::Sum(&ln), 1, 400_000, 22).unwrap();
        assert!(est.within_se(0.0, 3.0), "{est:?}");
        let c = |_: f64| 3.25;
        let est = mean_correction(WindowFunction::Sum(&c), 2, 10_000, 23).unwrap();
        assert_eq!((est.value, est.se), (0.0, 0.0));
        assert!(mean_correction(WindowFunction::Sum(&c), 2, 100, 23).is_err());
    }

    #[test]
    fn holst_examples() {
        let sq = |u: f64| u * u;
        let one = holst_vs_corrected(WindowFunction::Sum(&sq), 1, 200_000, 4).unwrap();
        assert_eq!(one.holst.value, one.corrected.value);
        assert_eq!(one.difference.value, 0.0);
        assert!(one.corrected.within_se(4.0, 3.0) || (one.corrected.value - 4.0).abs() < 0.08, "{one:?}");
        let c = |_: f64| 1.0;
        let flat = holst_vs_corrected(WindowFunction::Sum(&c), 3, 10_000, 4).unwrap();
        assert_eq!((flat.holst.value, flat.corrected.value), (0.0, 0.0));
        let two = holst_vs_corrected(WindowFunction::Sum(&sq), 2, 400_000, 5).unwrap();
        assert!((two.corrected.value - 20.0).abs() <= (3.0 * two.corrected.se).max(0.4), "{two:?}");
        assert!(two.holst.value.is_finite() && two.difference.se.is_finite());
    }

    #[test]
    fn general_moments_identity_is_degenerate() {
        let id = Repeated { h: |t: &[f64]| t[0], len: 200 };
        let g = estimate_general_moments(&id, 200, 1, 1000, 8).unwrap();
        assert!(g.sigma2.within_se(0.0, 3.0), "{g:?}");
        assert!(g.b.within_se(1.0, 3.0) && g.c.within_se(1.0, 3.0), "{g:?}");
    }

    #[test]
    fn general_moments_alternating() {
        let alt = Indexed { f: |k: usize, t: &[f64]| if k.is_multiple_of(2) { t[0] * t[0] } else { 0.0 }, len: 200 };
        let g = estimate_general_moments(&alt, 200, 1, 4000, 9).unwrap();
        assert!(g.b.within_se(2.0, 3.0), "{g:?}");
        assert!(g.c.within_se(10.0, 3.0), "{g:?}");
        assert!(g.sigma2.within_se(6.0 * 200.0, 3.0), "{g:?}");
        assert!(g.a.within_se(200.0, 3.0), "{g:?}");
    }

    #[test]
    fn general_moments_errors() {
        let id = Repeated { h: |t: &[f64]| t[0], len: 10 };
        assert_eq!(estimate_general_moments(&id, 11, 1, 100, 1), Err(Error::FamilyLengthMismatch { expected: 11, got: 10 }));
        assert!(estimate_general_moments(&id, 10, 1, 99, 1).is_err());
        let bad = Repeated { h: |t: &[f64]| 1.0 / (t[0] - t[0]), len: 10 };
        assert_eq!(estimate_general_moments(&bad, 10, 1, 100, 1), Err(Error::NonFiniteSample { draw: 0 }));
    }

    #[test]
    fn general_moments_scale_equivariance() {
        let base = Repeated { h: SumOf(|u: f64| u * u), len: 100 };
        let scaled = Repeated { h: SumOf(|u: f64| 3.0 * u * u), len: 100 };
        let a = estimate_general_moments(&base, 100, 2, 500, 13).unwrap();
        let b = estimate_general_moments(&scaled, 100, 2, 500, 13).unwrap();
        assert!((b.sigma2.value - 9.0 * a.sigma2.value).abs() < 1e-8 * b.sigma2.value.abs());
        assert!((b.b.value - 3.0 * a.b.value).abs() < 1e-9 * b.b.value.abs());
    }

    #[test]
    fn condition_ratio_examples() {
        let c = |_: f64| 5.0;
        let zero = clt_condition_ratio(WindowFunction::Sum(&c), 100, 2, 4.0, 10_000, 1).unwrap();
        assert_eq!(zero.value, 0.0);

        let sq = |u: f64| u * u;
        let at_n = clt_condition_ratio(WindowFunction::Sum(&sq), 100, 1, 3.0, 50_000, 2).unwrap();
        let at_4n = clt_condition_ratio(WindowFunction::Sum(&sq), 400, 1, 3.0, 50_000, 2).unwrap();
        assert!((at_4n.value * 2.0 - at_n.value).abs() < 1e-12 * at_n.value);

        // E g⁴ = 4752 for g = X² − 4X + 2, σ₁² = 4: ratio = 4752 / (100 · 16)
        let est = clt_condition_ratio(WindowFunction::Sum(&sq), 100, 1, 4.0, 2_000_000, 3).unwrap();
        assert!((est.value - 2.97).abs() <= 3.0 * est.se, "{est:?}");
        assert!(clt_condition_ratio(WindowFunction::Sum(&sq), 100, 1, 2.0, 10_000, 3).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn p_values_consistent(value in -1e3f64..1e3, n in 3usize..500, kind in 0usize..3) {
                let named = NamedStatistic::ALL[kind];
                let moments = closed_form_moments(named.into(), n, 1).unwrap();
                let result = StatisticResult { value, kind: StatisticKind::from(named).label(), variant: Variant::V, n, m: 1, summand_count: n };
                let r = standardize(&result, &moments).unwrap();
                prop_assert!((r.p_lower + r.p_upper - 1.0).abs() < 1e-12);
                prop_assert!((r.p_two_sided - 2.0 * r.p_lower.min(r.p_upper)).abs() < 1e-12);
                prop_assert!((0.0..=1.0).contains(&r.p_two_sided));
            }

            #[test]
            fn null_moments_scale_with_summands(n in 10usize..10_000, m in 1usize..9, kind in 0usize..3) {
                let named = NamedStatistic::ALL[kind];
                let v = null_moments(named, Variant::V, n, m).unwrap();
                let w = null_moments(named, Variant::W, n, m).unwrap();
                prop_assert_eq!(v.per_term_variance, w.per_term_variance);
                prop_assert_eq!(w.summands, n - m);
                let q = null_moments(named, Variant::Q, n, m).unwrap();
                prop_assert_eq!(q.summands, n / m);
                prop_assert!(q.variance > 0.0 && v.variance > 0.0);
            }
        }
    }
}
