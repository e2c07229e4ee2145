//! Sum-functions of m-tuples of scaled spacings.
//!
//! Every statistic here is a sum of `h` over windows of the scaled spacings
//! `n·S_k`. The variants differ only in which windows are summed:
//!
//! | variant | windows                                   | summands |
//! |---------|-------------------------------------------|----------|
//! | Z       | all `n` circular m-tuples                 | `n`      |
//! | V       | all `n` circular overlapping m-spacings   | `n`      |
//! | W       | overlapping m-spacings `k = 0..n−m−1`     | `n − m`  |
//! | Q       | complete disjoint blocks                  | `⌊n/m⌋`  |
//!
//! Sums are accumulated left to right with Neumaier compensation.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::spacings::{m_spacings, simple_spacings, validate_order, CircularSample, SpacingScheme};
use crate::sum::Accumulator;

/// `h(u)` applied to a scaled m-spacing. `None` marks a point outside the domain.
/// `Sync` so replications can share one function across threads.
pub trait SumFunction: Sync {
    fn eval(&self, u: f64) -> Option<f64>;
}

/// `h(x_1, …, x_m)` applied to a window of scaled simple spacings.
pub trait TupleFunction: Sync {
    fn eval(&self, tuple: &[f64]) -> Option<f64>;
}

/// Closures count as total wherever they return a finite value.
impl<F: Fn(f64) -> f64 + Sync> SumFunction for F {
    fn eval(&self, u: f64) -> Option<f64> {
        Some(self(u)).filter(|v| v.is_finite())
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> TupleFunction for F {
    fn eval(&self, tuple: &[f64]) -> Option<f64> {
        Some(self(tuple)).filter(|v| v.is_finite())
    }
}

/// Lifts a sum-function to the tuple `x ↦ h(x_1 + … + x_m)`.
#[derive(Debug, Clone, Copy)]
pub struct SumOf<H>(pub H);

impl<H: SumFunction> TupleFunction for SumOf<H> {
    fn eval(&self, tuple: &[f64]) -> Option<f64> {
        self.0.eval(tuple.iter().sum())
    }
}

/// Index-dependent functions `h_0, …, h_{n−1}` for the general sum R.
#[allow(clippy::len_without_is_empty)]
pub trait TupleFunctionFamily {
    fn len(&self) -> usize;
    fn eval(&self, k: usize, tuple: &[f64]) -> Option<f64>;
}

/// The same `h` at every index.
#[derive(Debug, Clone, Copy)]
pub struct Repeated<H> {
    pub h: H,
    pub len: usize,
}

impl<H: TupleFunction> TupleFunctionFamily for Repeated<H> {
    fn len(&self) -> usize {
        self.len
    }

    fn eval(&self, _k: usize, tuple: &[f64]) -> Option<f64> {
        self.h.eval(tuple)
    }
}

/// A family given by a closure `(k, tuple) ↦ h_k(tuple)`.
#[derive(Clone, Copy)]
pub struct Indexed<F> {
    pub f: F,
    pub len: usize,
}

impl<F: Fn(usize, &[f64]) -> f64> TupleFunctionFamily for Indexed<F> {
    fn len(&self) -> usize {
        self.len
    }

    fn eval(&self, k: usize, tuple: &[f64]) -> Option<f64> {
        Some((self.f)(k, tuple)).filter(|v| v.is_finite())
    }
}

impl<T: TupleFunction> TupleFunctionFamily for [T] {
    fn len(&self) -> usize {
        <[T]>::len(self)
    }

    fn eval(&self, k: usize, tuple: &[f64]) -> Option<f64> {
        self[k].eval(tuple)
    }
}

/// The three classical statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedStatistic {
    /// `h(u) = u²`
    Greenwood,
    /// `h(u) = ln u`
    Moran,
    /// `h(u) = u ln u`, with `0 ln 0 = 0`
    Entropy,
}

impl NamedStatistic {
    pub const ALL: [NamedStatistic; 3] =
        [NamedStatistic::Greenwood, NamedStatistic::Moran, NamedStatistic::Entropy];

    pub fn name(self) -> &'static str {
        match self {
            NamedStatistic::Greenwood => "greenwood",
            NamedStatistic::Moran => "moran",
            NamedStatistic::Entropy => "entropy",
        }
    }
}

impl SumFunction for NamedStatistic {
    #[inline]
    fn eval(&self, u: f64) -> Option<f64> {
        match self {
            NamedStatistic::Greenwood => Some(u * u),
            NamedStatistic::Moran => (u > 0.0).then(|| libm::log(u)),
            NamedStatistic::Entropy => {
                if u == 0.0 {
                    Some(0.0)
                } else if u > 0.0 {
                    Some(u * libm::log(u))
                } else {
                    None
                }
            }
        }
    }
}

/// What to sum: a named statistic or a caller-supplied function.
#[derive(Clone, Copy)]
pub enum StatisticKind<'a> {
    Greenwood,
    Moran,
    Entropy,
    CustomSum(&'a dyn SumFunction),
    CustomTuple(&'a dyn TupleFunction),
}

impl fmt::Debug for StatisticKind<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label().name())
    }
}

impl From<NamedStatistic> for StatisticKind<'_> {
    fn from(named: NamedStatistic) -> Self {
        match named {
            NamedStatistic::Greenwood => StatisticKind::Greenwood,
            NamedStatistic::Moran => StatisticKind::Moran,
            NamedStatistic::Entropy => StatisticKind::Entropy,
        }
    }
}

impl StatisticKind<'_> {
    pub fn named(&self) -> Option<NamedStatistic> {
        match self {
            StatisticKind::Greenwood => Some(NamedStatistic::Greenwood),
            StatisticKind::Moran => Some(NamedStatistic::Moran),
            StatisticKind::Entropy => Some(NamedStatistic::Entropy),
            _ => None,
        }
    }

    pub fn label(&self) -> KindLabel {
        match self {
            StatisticKind::Greenwood => KindLabel::Greenwood,
            StatisticKind::Moran => KindLabel::Moran,
            StatisticKind::Entropy => KindLabel::Entropy,
            StatisticKind::CustomSum(_) => KindLabel::CustomSum,
            StatisticKind::CustomTuple(_) => KindLabel::CustomTuple,
        }
    }
}

/// Owned tag identifying a [`StatisticKind`] in results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KindLabel {
    Greenwood,
    Moran,
    Entropy,
    CustomSum,
    CustomTuple,
    Family,
}

impl KindLabel {
    pub fn name(self) -> &'static str {
        match self {
            KindLabel::Greenwood => "greenwood",
            KindLabel::Moran => "moran",
            KindLabel::Entropy => "entropy",
            KindLabel::CustomSum => "custom-sum",
            KindLabel::CustomTuple => "custom-tuple",
            KindLabel::Family => "family",
        }
    }
}

/// Which window set the statistic sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Z,
    V,
    W,
    Q,
    R,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Z => "z",
            Variant::V => "v",
            Variant::W => "w",
            Variant::Q => "q",
            Variant::R => "r",
        }
    }

    /// Number of summands for `n` arcs at order `m`.
    pub fn summand_count(self, n: usize, m: usize) -> usize {
        match self {
            Variant::Z | Variant::V | Variant::R => n,
            Variant::W => n - m,
            Variant::Q => n / m,
        }
    }

    pub fn scheme(self, m: usize) -> SpacingScheme {
        match self {
            Variant::Q => SpacingScheme::Disjoint(m),
            _ if m == 1 => SpacingScheme::Simple,
            _ => SpacingScheme::Overlapping(m),
        }
    }
}

/// A statistic value with the parameters that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticResult {
    pub value: f64,
    pub kind: KindLabel,
    pub variant: Variant,
    pub n: usize,
    pub m: usize,
    pub summand_count: usize,
}

/// Scaled simple spacings with the first `m − 1` repeated at the end, so a
/// circular window starting at `k` is `ext[k..k + m]`.
fn extended_scaled_simple(sample: &CircularSample, m: usize) -> Vec<f64> {
    let mut scaled = simple_spacings(sample).scaled_values();
    scaled.extend_from_within(..m - 1);
    scaled
}

/// `Z = Σ_{k=0}^{n−1} h(nS_k, …, nS_{k+m−1})`, indices circular.
pub fn statistic_z(
    sample: &CircularSample,
    m: usize,
    h: &dyn TupleFunction,
) -> Result<StatisticResult> {
    let n = sample.arc_count();
    validate_order(m, n)?;
    let ext = extended_scaled_simple(sample, m);
    let value = tuple_sum(&ext, 0..n, m, h)?;
    Ok(StatisticResult { value, kind: KindLabel::CustomTuple, variant: Variant::Z, n, m, summand_count: n })
}

/// `V = Σ_{k=0}^{n−1} h(nS_{k,m})` over circular overlapping m-spacings.
pub fn statistic_v(sample: &CircularSample, m: usize, kind: StatisticKind<'_>) -> Result<StatisticResult> {
    evaluate(sample, m, kind, Variant::V)
}

/// `W = Σ_{k=0}^{n−m−1} h(nS_{k,m})`, the line version without wrap-around.
pub fn statistic_w(sample: &CircularSample, m: usize, kind: StatisticKind<'_>) -> Result<StatisticResult> {
    evaluate(sample, m, kind, Variant::W)
}

/// `Q = Σ_k h(nS_{km,m})` over the complete disjoint blocks.
pub fn statistic_q(sample: &CircularSample, m: usize, kind: StatisticKind<'_>) -> Result<StatisticResult> {
    evaluate(sample, m, kind, Variant::Q)
}

/// `R = Σ_{k=0}^{n−1} h_k(nS_k, …, nS_{k+m−1})` for an index-dependent family.
pub fn statistic_r<F: TupleFunctionFamily + ?Sized>(
    sample: &CircularSample,
    m: usize,
    family: &F,
) -> Result<StatisticResult> {
    let n = sample.arc_count();
    validate_order(m, n)?;
    if family.len() != n {
        return Err(Error::FamilyLengthMismatch { expected: n, got: family.len() });
    }
    let ext = extended_scaled_simple(sample, m);
    let mut acc = Accumulator::new();
    for k in 0..n {
        let v = family.eval(k, &ext[k..k + m]).ok_or(Error::DomainViolation { index: k })?;
        acc.add(v);
    }
    Ok(StatisticResult {
        value: acc.value(),
        kind: KindLabel::Family,
        variant: Variant::R,
        n,
        m,
        summand_count: n,
    })
}

/// Evaluates `kind` over the windows of `variant`. `Variant::Z` with a
/// sum-function kind coincides with `V`; tuple kinds see the simple-spacing
/// tuple of each window.
pub fn evaluate(
    sample: &CircularSample,
    m: usize,
    kind: StatisticKind<'_>,
    variant: Variant,
) -> Result<StatisticResult> {
    let n = sample.arc_count();
    validate_order(m, n)?;
    if variant == Variant::R {
        return Err(Error::InvalidConfig("the R variant needs a function family"));
    }
    let count = variant.summand_count(n, m);
    let starts = move |i: usize| if variant == Variant::Q { i * m } else { i };
    let value = match kind {
        StatisticKind::CustomTuple(h) => {
            let ext = extended_scaled_simple(sample, m);
            tuple_sum(&ext, (0..count).map(starts), m, h)?
        }
        _ => {
            let scaled = m_spacings(sample, variant.scheme(m))?.scaled_values();
            let moran = matches!(kind, StatisticKind::Moran);
            let mut acc = Accumulator::new();
            for (k, &u) in scaled[..count].iter().enumerate() {
                let v = match kind {
                    StatisticKind::Greenwood => NamedStatistic::Greenwood.eval(u),
                    StatisticKind::Moran => NamedStatistic::Moran.eval(u),
                    StatisticKind::Entropy => NamedStatistic::Entropy.eval(u),
                    StatisticKind::CustomSum(h) => h.eval(u),
                    StatisticKind::CustomTuple(_) => unreachable!(),
                };
                let index = starts(k);
                let v = v.ok_or(if moran {
                    Error::ZeroSpacing { index }
                } else {
                    Error::DomainViolation { index }
                })?;
                acc.add(v);
            }
            acc.value()
        }
    };
    Ok(StatisticResult { value, kind: kind.label(), variant, n, m, summand_count: count })
}

fn tuple_sum(
    ext: &[f64],
    starts: impl Iterator<Item = usize>,
    m: usize,
    h: &dyn TupleFunction,
) -> Result<f64> {
    let mut acc = Accumulator::new();
    for k in starts {
        acc.add(h.eval(&ext[k..k + m]).ok_or(Error::DomainViolation { index: k })?);
    }
    Ok(acc.value())
}
