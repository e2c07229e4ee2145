use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A reproducible xoshiro256++ stream keyed by `(seed, stream_id)`.
///
/// The 64-bit key is `mix64(seed ⊕ mix64(stream_id + φ))`, where φ is the
/// 64-bit golden-ratio increment; the generator state is expanded from the key
/// with SplitMix64. Replication `r` of a simulation always uses stream id `r`.
#[derive(Debug, Clone)]
pub struct SeededStream {
    rng: Xoshiro256PlusPlus,
    seed: u64,
    stream_id: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let key = mix64(seed ^ mix64(stream_id.wrapping_add(GOLDEN)));
        Self { rng: Xoshiro256PlusPlus::seed_from_u64(key), seed, stream_id }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` from the top 53 bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard exponential by inversion.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        exponential_from_uniform(self.uniform())
    }

    /// `count` uniforms on `[0, 1)`, sorted ascending.
    pub fn uniform_sorted(&mut self, count: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (0..count).map(|_| self.uniform()).collect();
        v.sort_unstable_by(f64::total_cmp);
        v
    }
}

/// `−ln(1 − u)`; finite and nonnegative for `u ∈ [0, 1)`.
#[inline]
pub fn exponential_from_uniform(u: f64) -> f64 {
    0.0 - libm::log1p(-u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_sequence() {
        let mut a = SeededStream::new(42, 7);
        let mut b = SeededStream::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = SeededStream::new(42, 8);
        let mut d = SeededStream::new(43, 7);
        let mut a = SeededStream::new(42, 7);
        let first = a.next_u64();
        assert_ne!(first, c.next_u64());
        assert_ne!(first, d.next_u64());
    }

    #[test]
    fn pinned_first_outputs() {
        // guards the documented key derivation against accidental change
        let mut s = SeededStream::new(0, 0);
        let a = s.next_u64();
        let mut t = SeededStream::new(0, 0);
        assert_eq!(a, t.next_u64());
        let key = mix64(mix64(GOLDEN));
        let mut raw = Xoshiro256PlusPlus::seed_from_u64(key);
        assert_eq!(a, raw.next_u64());
    }

    #[test]
    fn uniform_sorted_properties() {
        let mut s = SeededStream::new(1, 2);
        let one = s.uniform_sorted(1);
        assert_eq!(one.len(), 1);
        assert!((0.0..1.0).contains(&one[0]));
        let many = s.uniform_sorted(1000);
        assert!(many.windows(2).all(|w| w[0] <= w[1]));
        assert!(many.iter().all(|u| (0.0..1.0).contains(u)));
    }

    #[test]
    fn uniform_moments() {
        let mut s = SeededStream::new(2024, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| s.uniform()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.002, "{mean}");
    }

    #[test]
    fn exponential_inversion() {
        assert_eq!(exponential_from_uniform(0.0), 0.0);
        assert!(exponential_from_uniform(0.0).is_sign_positive());
        let u = 1.0 - libm::exp(-1.0);
        assert!((exponential_from_uniform(u) - 1.0).abs() < 1e-15);
        let top = 1.0 - 1.0 / (1u64 << 53) as f64;
        assert!(exponential_from_uniform(top).is_finite());
    }

    #[test]
    fn exponential_moments() {
        let mut s = SeededStream::new(99, 1);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| s.exponential()).collect();
        assert!(xs.iter().all(|x| *x >= 0.0 && x.is_finite()));
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 1.0).abs() < 0.003, "{mean}");
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }
}
