/// Deterministic, portable pseudo-random stream.
///
/// The generator is xoshiro256** with its state expanded from a 64-bit seed
/// by the splitmix64 mixer, both implemented here so the stream is identical
/// across platforms and toolchain versions. Bounded draws use rejection
/// sampling on the high bits, which keeps them exactly uniform.
#[derive(Debug, Clone)]
pub struct Rng {
    state: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A derived seed for the sub-stream at `(seed, index)`; two splitmix64
/// mixes keep nearby indices statistically unrelated.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut s = seed;
    let base = splitmix64(&mut s);
    let mut t = index.wrapping_add(1);
    base ^ splitmix64(&mut t)
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        let mut s = seed;
        Rng {
            state: [
                splitmix64(&mut s),
                splitmix64(&mut s),
                splitmix64(&mut s),
                splitmix64(&mut s),
            ],
        }
    }

    /// An independent sub-stream derived from `(seed, index)`, used to make
    /// per-row scenario generation order-free.
    pub fn substream(seed: u64, index: u64) -> Self {
        Rng::from_seed(derive_seed(seed, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in `0..bound` (`bound > 0`), via rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// Uniform integer in the inclusive range `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.below(hi - lo + 1)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
