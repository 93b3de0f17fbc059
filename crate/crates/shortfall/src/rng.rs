//! Deterministic counter-based uniform generator.
//!
//! Reproducibility of the Monte-Carlo experiments must not depend on worker
//! scheduling or on the version of an external RNG crate, so the harness
//! keys an independent SplitMix64 stream to every replication via
//! [`stream_seed`] and walks it sequentially. SplitMix64 is the standard
//! 64-bit finalizer-based generator of Steele, Lea and Flood; it is trivially
//! seedable, splittable by hashing, and passes BigCrush when used this way.

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform draw in the open interval (0, 1): 53 significant bits offset
    /// by half an ulp so neither endpoint can occur.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (((self.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }
}

/// Seed of the independent stream `stream` under `master`: two mixing rounds
/// over the pair, so streams for adjacent indices share no structure.
pub fn stream_seed(master: u64, stream: u64) -> u64 {
    mix(mix(master ^ GOLDEN_GAMMA.wrapping_mul(stream.wrapping_add(1))).wrapping_add(stream))
}
