//! Seedable, splittable counter-based random number generator.
//!
//! The generator is SplitMix64: the state is a 64-bit counter advanced by the
//! golden-ratio increment, and each output is a finalizer mix of the counter,
//! so `output(n) = mix(seed + (n + 1) * 0x9E3779B97F4A7C15)`. Any
//! implementation following this recipe reproduces the streams bit for bit:
//!
//! ```text
//! mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!         z ^= z >> 27; z *= 0x94D049BB133111EB;
//!         z ^= z >> 31; return z
//! next_u64(): state += 0x9E3779B97F4A7C15; return mix(state)
//! next_f64(): next_u64() >> 11, scaled by 2^-53   (uniform in [0, 1))
//! split(k):   CounterRng::new(mix(seed ^ (k + 1) * 0xD2B74407B1CE6E93))
//! ```
//!
//! `split` derives independent child streams for parallel shot batches;
//! distinct `k` give unrelated seeds, and the derivation depends only on the
//! original seed, not on how much of the parent stream was consumed.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const SPLIT_MULT: u64 = 0xD2B7_4407_B1CE_6E93;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic 64-bit counter-based generator (SplitMix64).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
    state: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, state: seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Child generator for stream `k`, independent of the parent's position.
    pub fn split(&self, k: u64) -> Self {
        Self::new(mix(self.seed ^ k.wrapping_add(1).wrapping_mul(SPLIT_MULT)))
    }

    /// Draw an index from the cumulative distribution `cdf` (nondecreasing,
    /// last entry 1) by inverse-CDF sampling.
    pub fn sample_cdf(&mut self, cdf: &[f64]) -> usize {
        let u = self.next_f64();
        for (k, &c) in cdf.iter().enumerate() {
            if u < c {
                return k;
            }
        }
        cdf.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream_seed_zero() {
        // published SplitMix64 test vector
        let mut rng = CounterRng::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
        assert_eq!(rng.next_u64(), 0xF88B_B8A8_724C_81EC);
    }

    #[test]
    fn reference_stream_seed_42() {
        let mut rng = CounterRng::new(42);
        assert_eq!(rng.next_u64(), 0xBDD7_3226_2FEB_6E95);
        assert_eq!(rng.next_u64(), 0x28EF_E333_B266_F103);
    }

    #[test]
    fn floats_are_in_unit_interval() {
        let mut rng = CounterRng::new(7);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
        let mut rng = CounterRng::new(0);
        assert_eq!(rng.next_f64(), 0.8833108082136426);
    }

    #[test]
    fn split_is_position_independent() {
        let parent = CounterRng::new(123);
        let mut consumed = parent;
        for _ in 0..17 {
            consumed.next_u64();
        }
        assert_eq!(parent.split(3), consumed.split(3));
        assert_ne!(parent.split(0).next_u64(), parent.split(1).next_u64());
    }

    #[test]
    fn cdf_sampling_hits_all_bins() {
        let mut rng = CounterRng::new(5);
        let cdf = [0.25, 0.5, 1.0];
        let mut counts = [0usize; 3];
        for _ in 0..10_000 {
            counts[rng.sample_cdf(&cdf)] += 1;
        }
        assert!(counts.iter().all(|&c| c > 1_000));
        assert!((counts[2] as f64 / 10_000.0 - 0.5).abs() < 0.05);
    }
}
