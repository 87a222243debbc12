//! Counter-based splittable pseudorandom streams.
//!
//! Every source of randomness in the crate draws from a [`Stream`] derived
//! from a `(master seed, role, index)` triple. Environment transitions,
//! exploration, weight initialization and evaluation therefore consume
//! independent sequences that can be replayed individually: re-deriving the
//! same triple always yields the same stream regardless of what any other
//! stream consumed in between.

use crate::math;
use alloc::vec::Vec;

/// Stream roles. Keeping these distinct is what makes, e.g., evaluation
/// episodes independent of how many training episodes preceded them.
pub mod role {
    pub const ENV: u64 = 0x01;
    pub const EXPLORE: u64 = 0x02;
    pub const INIT: u64 = 0x03;
    pub const EVAL: u64 = 0x04;
    pub const REPLAY: u64 = 0x05;
    pub const NOISE: u64 = 0x06;
    pub const PROBE: u64 = 0x07;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic pseudorandom stream (SplitMix64 core).
#[derive(Debug, Clone)]
pub struct Stream {
    state: u64,
}

impl Stream {
    /// Derive the stream keyed by `(master, role, index)`.
    pub fn derive(master: u64, role: u64, index: u64) -> Self {
        let mut z = mix(master ^ GOLDEN);
        z = mix(z ^ role.wrapping_mul(0xD605_0B58_63D4_B8C9));
        z = mix(z ^ index.wrapping_mul(0xA24B_AED4_963E_E407));
        Stream { state: z }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / ((1u64 << 53) as f64))
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`, unbiased via rejection.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return (v % n) as usize;
            }
        }
    }

    /// Standard normal draw (Box-Muller, cosine branch).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
    }

    /// Sample an index from an (assumed normalized) probability vector by
    /// inverse CDF; any residual mass from rounding falls on the last
    /// nonzero entry.
    pub fn categorical(&mut self, probs: &[f64]) -> usize {
        let u = self.next_f64();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if u < acc {
                return i;
            }
        }
        last_nonzero
    }

    /// A vector of independent uniform draws in `[-b, b]`.
    pub fn uniform_vec(&mut self, len: usize, b: f64) -> Vec<f64> {
        (0..len).map(|_| self.range_f64(-b, b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_reproducible_and_role_separated() {
        let mut a = Stream::derive(7, role::ENV, 3);
        let mut b = Stream::derive(7, role::ENV, 3);
        let mut c = Stream::derive(7, role::EVAL, 3);
        let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..4).map(|_| c.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }

    #[test]
    fn uniform_mean_and_range() {
        let mut s = Stream::derive(11, role::PROBE, 0);
        let n = 20_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let x = s.next_f64();
            assert!((0.0..1.0).contains(&x));
            sum += x;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn below_is_roughly_uniform() {
        let mut s = Stream::derive(5, role::PROBE, 1);
        let mut counts = [0usize; 7];
        let n = 70_000;
        for _ in 0..n {
            counts[s.below(7)] += 1;
        }
        for &c in &counts {
            let expect = n as f64 / 7.0;
            assert!((c as f64 - expect).abs() < 4.0 * (expect * (1.0 - 1.0 / 7.0)).sqrt());
        }
    }

    #[test]
    fn categorical_respects_masses() {
        let mut s = Stream::derive(13, role::PROBE, 2);
        let probs = [0.2, 0.0, 0.5, 0.3];
        let mut counts = [0usize; 4];
        let n = 50_000;
        for _ in 0..n {
            counts[s.categorical(&probs)] += 1;
        }
        assert_eq!(counts[1], 0);
        for (i, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                let expect = p * n as f64;
                assert!(
                    (counts[i] as f64 - expect).abs() < 4.0 * (expect * (1.0 - p)).sqrt(),
                    "index {i}"
                );
            }
        }
    }

    #[test]
    fn normal_moments() {
        let mut s = Stream::derive(17, role::PROBE, 3);
        let n = 60_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let x = s.normal();
            m1 += x;
            m2 += x * x;
        }
        m1 /= n as f64;
        m2 /= n as f64;
        assert!(m1.abs() < 0.02);
        assert!((m2 - 1.0).abs() < 0.03);
    }
}
