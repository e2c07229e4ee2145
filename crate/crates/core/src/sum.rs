//! Compensated (Neumaier) accumulation.
//!
//! Every reduction in the crate goes through [`Accumulator`] in a fixed
//! left-to-right order, so a given input sequence always yields the same bits.

/// Running Neumaier sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub const fn new() -> Self {
        Self { sum: 0.0, compensation: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if libm::fabs(self.sum) >= libm::fabs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in; used for fixed-order merges of partitions.
    pub fn merge(&mut self, other: &Accumulator) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for Accumulator {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for Accumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        acc.extend(iter);
        acc
    }
}

/// Compensated sum of a sequence.
pub fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<Accumulator>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let naive: f64 = [1e16, 1.0, -1e16].iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(sum([1e16, 1.0, -1e16]), 1.0);
    }

    #[test]
    fn tenths_sum_to_one() {
        assert_eq!(sum(core::iter::repeat_n(0.1, 10)), 1.0);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: [f64; 6] = [0.3, 1e-17, 2.5, -0.7, 1e10, -1e10];
        let mut a: Accumulator = xs[..3].iter().copied().collect();
        let b: Accumulator = xs[3..].iter().copied().collect();
        a.merge(&b);
        assert!((a.value() - sum(xs)).abs() < 1e-15);
    }
}
