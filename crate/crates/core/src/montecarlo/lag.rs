//! Stationary lag covariances of `h` over sliding windows of one exponential
//! stream.
//!
//! Windows `X_t^m = (X_t, …, X_{t+m−1})` of an iid standard-exponential
//! sequence form an (m−1)-dependent stationary sequence. All lags are
//! estimated from the same anchors, so lag `j` and lag `−j` of
//! `cov(h(X_0^m), h(X_j^m))` share one accumulator.

use alloc::vec;
use alloc::vec::Vec;

use super::stream::SeededStream;
use super::{Estimate, BATCHES};
use crate::error::{Error, Result};
use crate::statistics::{SumFunction, TupleFunction};

/// `h` seen either through the window total or through the whole tuple.
#[derive(Clone, Copy)]
pub enum WindowFunction<'a> {
    Sum(&'a dyn SumFunction),
    Tuple(&'a dyn TupleFunction),
}

impl WindowFunction<'_> {
    #[inline]
    pub fn eval(&self, tuple: &[f64], total: f64) -> Option<f64> {
        match self {
            WindowFunction::Sum(h) => h.eval(total),
            WindowFunction::Tuple(h) => h.eval(tuple),
        }
        .filter(|v| v.is_finite())
    }
}

/// Window values of one stream.
pub(crate) struct Windows {
    pub m: usize,
    /// First element `X_t` of each window.
    pub first: Vec<f64>,
    pub total: Vec<f64>,
    pub h: Vec<f64>,
    pub mean_h: f64,
    pub mean_total: f64,
    /// `g_t = h_t − (κ/m)|X_t^m|` with `κ` the whole-run `cov(h(X_0^m), |X_0^m|)`:
    /// `h` with its linear trend in the window total removed.
    pub g: Vec<f64>,
    pub mean_g: f64,
    /// Anchors `t` with all `|j| < m` neighbours available.
    pub anchors: core::ops::Range<usize>,
}

impl Windows {
    /// Draws `anchors + 3m − 2` exponentials so every one of `anchors`
    /// positions has complete lag neighbourhoods on both sides.
    pub fn draw(h: WindowFunction<'_>, m: usize, anchors: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut stream = SeededStream::new(seed, 0);
        let len = anchors + 3 * m - 2;
        let x: Vec<f64> = (0..len).map(|_| stream.exponential()).collect();
        let count = len - m + 1;
        let mut first = Vec::with_capacity(count);
        let mut total = Vec::with_capacity(count);
        let mut hv = Vec::with_capacity(count);
        for p in 0..count {
            let tuple = &x[p..p + m];
            let s: f64 = tuple.iter().sum();
            first.push(tuple[0]);
            total.push(s);
            hv.push(h.eval(tuple, s).ok_or(Error::NonFiniteSample { draw: p })?);
        }
        let anchors = m - 1..m - 1 + anchors;
        let (mean_h, mean_total) = (exact_mean(&hv), exact_mean(&total));
        let slope = anchors.clone().map(|t| (hv[t] - mean_h) * (total[t] - mean_total)).sum::<f64>()
            / anchors.len() as f64;
        let beta = slope / m as f64;
        let g: Vec<f64> = hv.iter().zip(&total).map(|(h, s)| h - beta * s).collect();
        Ok(Self { m, mean_h, mean_total, mean_g: exact_mean(&g), g, first, total, h: hv, anchors })
    }

    /// Contiguous anchor batches for batch-means errors.
    pub fn batches(&self) -> impl Iterator<Item = core::ops::Range<usize>> + '_ {
        batch_ranges(self.anchors.clone(), BATCHES)
    }
}

pub(crate) fn batch_ranges(
    range: core::ops::Range<usize>,
    batches: usize,
) -> impl Iterator<Item = core::ops::Range<usize>> {
    let len = range.len();
    let start = range.start;
    (0..batches).map(move |b| start + b * len / batches..start + (b + 1) * len / batches)
}

/// Mean that returns the common value exactly when all entries agree.
pub(crate) fn exact_mean(values: &[f64]) -> f64 {
    match values.first() {
        None => 0.0,
        Some(&v0) if values.iter().all(|&v| v == v0) => v0,
        Some(_) => crate::sum::sum(values.iter().copied()) / values.len() as f64,
    }
}

/// Lag covariances over one range of anchors.
#[derive(Debug, Clone)]
pub(crate) struct LagSums {
    /// `cov(h(X_0^m), |X_j^m|)`, `j = −m+1..m`, stored at `j + m − 1`.
    pub hw: Vec<f64>,
    /// `cov(g_0, g_j)`, `j = 0..m`.
    pub gg: Vec<f64>,
}

impl LagSums {
    pub fn over(w: &Windows, anchors: core::ops::Range<usize>) -> Self {
        let m = w.m;
        let count = anchors.len() as f64;
        let mut hw = vec![0.0; 2 * m - 1];
        let mut gg = vec![0.0; m];
        for t in anchors {
            let b = w.g[t] - w.mean_g;
            for (j, slot) in gg.iter_mut().enumerate() {
                *slot += b * (w.g[t + j] - w.mean_g);
            }
            let a = w.h[t] - w.mean_h;
            for (i, slot) in hw.iter_mut().enumerate() {
                *slot += a * (w.total[t + i + 1 - m] - w.mean_total);
            }
        }
        hw.iter_mut().chain(gg.iter_mut()).for_each(|v| *v /= count);
        Self { hw, gg }
    }

    /// `cov(h(X_0^m), |X_0^m|)`.
    pub fn own_total(&self) -> f64 {
        self.hw[self.gg.len() - 1]
    }

    /// `Σ_{|j|<m} cov(h_0, h_j) − cov²(h_0, |X_0^m|)`.
    ///
    /// Evaluated as the long-run variance of `g_t = h_t − (κ/m)|X_t^m|`. At
    /// `κ = cov(h_0, |X_0^m|)` this is `Σ cov(h_0, h_j) − 2κ² + κ²` — the same
    /// quantity — but it avoids subtracting two large, strongly correlated
    /// estimates.
    pub fn corrected(&self) -> f64 {
        self.gg[0] + 2.0 * self.gg[1..].iter().sum::<f64>()
    }

    /// The lag-averaged form `Σ cov(h_0, h_j) − (m⁻¹ Σ_j cov(h_0, |X_j^m|))²`,
    /// i.e. [`corrected`](Self::corrected) `+ d_0² − d̄²`.
    pub fn holst(&self) -> f64 {
        let m = self.gg.len() as f64;
        let d0 = self.own_total();
        let avg = self.hw.iter().sum::<f64>() / m;
        // factored so the m = 1 case adds an exact zero
        self.corrected() + (d0 - avg) * (d0 + avg)
    }
}

/// Batch-means estimate of a functional of the lag covariances.
pub(crate) fn batched(w: &Windows, f: impl Fn(&LagSums) -> f64) -> Estimate {
    let value = f(&LagSums::over(w, w.anchors.clone()));
    let per_batch: Vec<f64> = w.batches().map(|r| f(&LagSums::over(w, r))).collect();
    Estimate { value, se: super::batch_se(&per_batch) }
}

/// σ_m² = Σ_{j=−m+1}^{m−1} cov(h(X_0^m), h(X_j^m)) − cov²(h(X_0^m), |X_0^m|),
/// estimated from one stream with `window_draws` anchor windows.
pub fn estimate_sigma_m(
    h: WindowFunction<'_>,
    m: usize,
    window_draws: usize,
    seed: u64,
) -> Result<Estimate> {
    if window_draws < super::MIN_DRAWS {
        return Err(Error::InvalidConfig("at least 10^4 window draws are required"));
    }
    let w = Windows::draw(h, m, window_draws, seed)?;
    Ok(batched(&w, LagSums::corrected))
}
