//! Minimal deterministic RNG (SplitMix64).
//!
//! Experiments must be bit-reproducible for a given (seed, trial) across
//! thread counts and library versions, so the generator is pinned here
//! rather than pulled from an external crate whose streams may change.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for a numbered sub-task (trial, worker, ...).
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut g = SplitMix64::new(seed ^ stream.wrapping_mul(0xa24b_aed4_963e_e407));
        // burn one output so streams with nearby ids decorrelate
        g.next_u64();
        g
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in [0, n) by masked rejection; n must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        if n == 1 {
            return 0;
        }
        let mask = u64::MAX >> (n - 1).leading_zeros();
        loop {
            let v = self.next_u64() & mask;
            if v < n {
                return v;
            }
        }
    }

    /// Uniform f64 in [0, 1).
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// First `take` entries of a Fisher-Yates shuffle of `items`, i.e. a uniform
/// sample without replacement. The full shuffle is not materialized.
pub fn partial_shuffle<T: Copy>(items: &mut [T], take: usize, rng: &mut SplitMix64) {
    let n = items.len();
    assert!(take <= n);
    for i in 0..take.min(n.saturating_sub(1)) {
        let j = i + rng.below((n - i) as u64) as usize;
        items.swap(i, j);
    }
}
