//! Xoroshiro128+ with SplitMix64 seeding.
//!
//! Bit-exact with the Blackman/Vigna reference (rotation constants 55, 14, 36).

use crate::error::{invalid, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 step, used only for seeding.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 128-bit generator state. Never all-zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngState {
    s0: u64,
    s1: u64,
}

impl RngState {
    pub fn new(s0: u64, s1: u64) -> Result<Self> {
        if s0 == 0 && s1 == 0 {
            return Err(invalid("xoroshiro128+ state must not be all zero"));
        }
        Ok(RngState { s0, s1 })
    }

    /// Fills both words from a SplitMix64 stream started at `seed`.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = seed;
        loop {
            let s0 = splitmix64(&mut sm);
            let s1 = splitmix64(&mut sm);
            if s0 != 0 || s1 != 0 {
                return RngState { s0, s1 };
            }
        }
    }

    /// Independent stream for a sub-run, derived from a base seed and a tag
    /// (the CLI uses the value of k).
    pub fn fork(seed: u64, tag: u64) -> Self {
        let mut sm = tag.wrapping_mul(GOLDEN_GAMMA) ^ seed;
        RngState::from_seed(splitmix64(&mut sm))
    }

    pub fn words(&self) -> (u64, u64) {
        (self.s0, self.s1)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s0 = self.s0;
        let mut s1 = self.s1;
        let result = s0.wrapping_add(s1);
        s1 ^= s0;
        self.s0 = s0.rotate_left(55) ^ s1 ^ (s1 << 14);
        self.s1 = s1.rotate_left(36);
        result
    }

    /// Uniform double in `[0, 1)` from the top 53 bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased integer in `[0, bound)`.
    ///
    /// Multiply-shift on the high half of the 128-bit product, rejecting the
    /// low-half values that would introduce bias.
    pub fn index(&mut self, bound: usize) -> Result<usize> {
        if bound == 0 {
            return Err(invalid("rng bound must be positive"));
        }
        Ok(self.index_unchecked(bound))
    }

    #[inline]
    pub(crate) fn index_unchecked(&mut self, bound: usize) -> usize {
        let bound = bound as u64;
        let mut m = u128::from(self.next_u64()) * u128::from(bound);
        if (m as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(bound);
            }
        }
        (m >> 64) as usize
    }

    /// `m` distinct indices from `[0, n)` by partial Fisher-Yates.
    pub fn sample_k(&mut self, n: usize, m: usize) -> Result<Vec<usize>> {
        if m == 0 || m > n {
            return Err(invalid(format!("cannot sample {m} of {n} indices")));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..m {
            let j = i + self.index_unchecked(n - i);
            pool.swap(i, j);
        }
        pool.truncate(m);
        Ok(pool)
    }
}

impl rand_core::RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        (RngState::next_u64(self) >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        RngState::next_u64(self)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        rand_core::impls::fill_bytes_via_next(self, dst)
    }
}
