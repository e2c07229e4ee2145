//! Circular samples and their simple, overlapping and disjoint m-spacings.
//!
//! `n − 1` observations in `[0, 1)` plus the anchor `U_0 = 0` cut the unit
//! circle into `n` arcs. Indices past the end wrap with `U_k = 1 + U_{k−n}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Ordered points on the unit circle, anchored at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularSample {
    points: Vec<f64>,
}

impl CircularSample {
    /// Prepends the anchor and sorts. Ties are kept and give zero spacings.
    pub fn from_unit_observations(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some((index, &value)) =
            values.iter().enumerate().find(|(_, v)| !(0.0..1.0).contains(*v))
        {
            return Err(Error::ValueOutOfRange { index, value });
        }
        let mut points = Vec::with_capacity(values.len() + 1);
        points.push(0.0);
        points.extend_from_slice(values);
        points.sort_unstable_by(f64::total_cmp);
        Ok(Self { points })
    }

    /// `U_0 = 0, U_1 ≤ … ≤ U_{n−1}`.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of arcs `n`, which equals the number of points including the anchor.
    pub fn arc_count(&self) -> usize {
        self.points.len()
    }

    /// `U_k` for any `k ≥ 0`, with the circular extension.
    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        let n = self.points.len();
        let turns = k / n;
        self.points[k % n] + turns as f64
    }
}

/// Which spacings to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingScheme {
    Simple,
    Overlapping(usize),
    Disjoint(usize),
}

impl SpacingScheme {
    pub fn order(self) -> usize {
        match self {
            SpacingScheme::Simple => 1,
            SpacingScheme::Overlapping(m) | SpacingScheme::Disjoint(m) => m,
        }
    }

    pub(crate) fn validate(self, n: usize) -> Result<usize> {
        validate_order(self.order(), n)
    }
}

pub(crate) fn validate_order(m: usize, n: usize) -> Result<usize> {
    if m == 0 {
        Err(Error::ZeroOrder)
    } else if m >= n {
        Err(Error::OrderTooLarge { m, n })
    } else {
        Ok(m)
    }
}

/// Arc lengths of one spacing scheme, as fractions of the circumference.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingsVector {
    values: Vec<f64>,
    scheme: SpacingScheme,
    n: usize,
}

impl SpacingsVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scheme(&self) -> SpacingScheme {
        self.scheme
    }

    pub fn order(&self) -> usize {
        self.scheme.order()
    }

    /// Arc count of the sample the spacings came from.
    pub fn arc_count(&self) -> usize {
        self.n
    }

    /// `n · S` elementwise, `n` being the source arc count for every scheme.
    pub fn scaled_values(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.values.iter().map(|v| n * v).collect()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Forms the spacings of `sample` under `scheme`.
///
/// Disjoint spacings cover the `⌊n/m⌋` complete blocks only.
pub fn m_spacings(sample: &CircularSample, scheme: SpacingScheme) -> Result<SpacingsVector> {
    let n = sample.arc_count();
    let m = scheme.validate(n)?;
    let values = match scheme {
        SpacingScheme::Simple | SpacingScheme::Overlapping(_) => {
            (0..n).map(|k| sample.point(k + m) - sample.point(k)).collect()
        }
        SpacingScheme::Disjoint(_) => (0..n / m)
            .map(|k| sample.point((k + 1) * m) - sample.point(k * m))
            .collect(),
    };
    Ok(SpacingsVector { values, scheme, n })
}

/// Simple spacings `S_0, …, S_{n−1}`.
pub fn simple_spacings(sample: &CircularSample) -> SpacingsVector {
    m_spacings(sample, SpacingScheme::Simple).expect("order 1 is valid for n >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sum::sum;
    use alloc::vec;
    use proptest::prelude::*;

    fn example() -> CircularSample {
        CircularSample::from_unit_observations(&[0.2, 0.9, 0.5]).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn ingestion_sorts_and_anchors() {
        let s = example();
        assert_eq!(s.points(), &[0.0, 0.2, 0.5, 0.9]);
        assert_eq!(s.arc_count(), 4);
        let single = CircularSample::from_unit_observations(&[0.5]).unwrap();
        assert_eq!(single.points(), &[0.0, 0.5]);
        assert_eq!(single.arc_count(), 2);
    }

    #[test]
    fn ingestion_errors() {
        assert_eq!(CircularSample::from_unit_observations(&[]), Err(Error::EmptyInput));
        assert_eq!(
            CircularSample::from_unit_observations(&[0.5, 1.0]),
            Err(Error::ValueOutOfRange { index: 1, value: 1.0 })
        );
        assert!(matches!(
            CircularSample::from_unit_observations(&[-0.1]),
            Err(Error::ValueOutOfRange { index: 0, .. })
        ));
        assert!(CircularSample::from_unit_observations(&[f64::NAN]).is_err());
    }

    #[test]
    fn duplicates_give_zero_spacings() {
        let s = CircularSample::from_unit_observations(&[0.3, 0.3]).unwrap();
        let sp = simple_spacings(&s);
        assert_eq!(sp.values()[1], 0.0);
    }

    #[test]
    fn worked_spacings() {
        let s = example();
        assert_close(simple_spacings(&s).values(), &[0.2, 0.3, 0.4, 0.1]);
        let ov = m_spacings(&s, SpacingScheme::Overlapping(2)).unwrap();
        assert_close(ov.values(), &[0.5, 0.7, 0.5, 0.3]);
        assert!((sum(ov.values().iter().copied()) - 2.0).abs() < 1e-15);
        let dj = m_spacings(&s, SpacingScheme::Disjoint(2)).unwrap();
        assert_close(dj.values(), &[0.5, 0.5]);
    }

    #[test]
    fn disjoint_drops_partial_block() {
        let s = CircularSample::from_unit_observations(&[0.1, 0.3, 0.6, 0.8]).unwrap();
        let dj = m_spacings(&s, SpacingScheme::Disjoint(2)).unwrap();
        assert_eq!(dj.values().len(), 2);
        assert_close(dj.values(), &[0.3, 0.5]);
        assert!(sum(dj.values().iter().copied()) < 1.0);
    }

    #[test]
    fn order_checks() {
        let s = example();
        assert_eq!(
            m_spacings(&s, SpacingScheme::Overlapping(4)),
            Err(Error::OrderTooLarge { m: 4, n: 4 })
        );
        assert_eq!(m_spacings(&s, SpacingScheme::Disjoint(0)), Err(Error::ZeroOrder));
    }

    #[test]
    fn scaling() {
        let s = example();
        assert_close(&simple_spacings(&s).scaled_values(), &[0.8, 1.2, 1.6, 0.4]);
        let ov = m_spacings(&s, SpacingScheme::Overlapping(2)).unwrap();
        assert_close(&ov.scaled_values(), &[2.0, 2.8, 2.0, 1.2]);
        let grid: Vec<f64> = (1..8).map(|k| k as f64 / 8.0).collect();
        let g = CircularSample::from_unit_observations(&grid).unwrap();
        assert_eq!(simple_spacings(&g).scaled_values(), vec![1.0; 8]);
    }

    fn observations() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0..1.0f64, 1..60)
    }

    proptest! {
        #[test]
        fn sum_identities(obs in observations(), m_seed in 1usize..60) {
            let s = CircularSample::from_unit_observations(&obs).unwrap();
            let n = s.arc_count();
            let m = 1 + m_seed % (n - 1);
            let tol = 4.0 * n as f64 * f64::EPSILON;
            let simple = simple_spacings(&s);
            prop_assert!((sum(simple.values().iter().copied()) - 1.0).abs() <= tol);
            let ov = m_spacings(&s, SpacingScheme::Overlapping(m)).unwrap();
            prop_assert_eq!(ov.values().len(), n);
            prop_assert!((sum(ov.values().iter().copied()) - m as f64).abs() <= tol * m as f64);
            prop_assert!(ov.values().iter().all(|v| (0.0..=1.0).contains(v)));
            let dj = m_spacings(&s, SpacingScheme::Disjoint(m)).unwrap();
            prop_assert_eq!(dj.values().len(), n / m);
            let total = sum(dj.values().iter().copied());
            if n.is_multiple_of(m) {
                prop_assert!((total - 1.0).abs() <= tol);
            } else {
                prop_assert!(total <= 1.0 + tol);
            }
        }

        #[test]
        fn overlapping_is_sum_of_simple(obs in observations(), m_seed in 1usize..60) {
            let s = CircularSample::from_unit_observations(&obs).unwrap();
            let n = s.arc_count();
            let m = 1 + m_seed % (n - 1);
            let simple = simple_spacings(&s);
            let ov = m_spacings(&s, SpacingScheme::Overlapping(m)).unwrap();
            for k in 0..n {
                let spanned: f64 = (k..k + m).map(|i| simple.values()[i % n]).sum();
                prop_assert!((ov.values()[k] - spanned).abs() <= 4.0 * m as f64 * f64::EPSILON);
            }
        }

        #[test]
        fn order_one_overlap_is_simple(obs in observations()) {
            let s = CircularSample::from_unit_observations(&obs).unwrap();
            let a = m_spacings(&s, SpacingScheme::Overlapping(1)).unwrap();
            let simple = simple_spacings(&s);
            prop_assert_eq!(a.values(), simple.values());
        }

        #[test]
        fn repeatable(obs in observations()) {
            let a = CircularSample::from_unit_observations(&obs).unwrap();
            let b = CircularSample::from_unit_observations(&obs).unwrap();
            let sa = m_spacings(&a, SpacingScheme::Overlapping(1)).unwrap();
            let sb = m_spacings(&b, SpacingScheme::Overlapping(1)).unwrap();
            prop_assert!(sa.values().iter().zip(sb.values()).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
}
