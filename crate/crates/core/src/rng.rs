//! Counter-based pseudorandomness. Every output word is a pure function of
//! `(seed, stream, domain, counter)`, so any single draw can be recomputed in
//! isolation and parallel workers never share generator state.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const DOMAIN_MUL: u64 = 0xd1b5_4a32_d192_ed03;

/// SplitMix64 output finalizer; a bijection on `u64`.
#[inline(always)]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let k = mix64(seed ^ GOLDEN);
        CounterRng {
            key: mix64(k.wrapping_add(mix64(stream.wrapping_add(1).wrapping_mul(GOLDEN)))),
        }
    }

    /// Word `counter` of sub-sequence `domain`.
    #[inline]
    pub fn word_at(&self, domain: u64, counter: u64) -> u64 {
        let k = mix64(self.key ^ domain.wrapping_add(1).wrapping_mul(DOMAIN_MUL));
        mix64(mix64(k.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN))) ^ k)
    }

    #[inline]
    pub fn word(&self, counter: u64) -> u64 {
        self.word_at(0, counter)
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn unit_at(&self, domain: u64, counter: u64) -> f64 {
        (self.word_at(domain, counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p` (exactly never for `p <= 0`, always for `p >= 1`).
    #[inline]
    pub fn bernoulli_at(&self, domain: u64, counter: u64, p: f64) -> bool {
        self.unit_at(domain, counter) < p
    }

    /// Uniform in `0..bound` by multiply-shift; bias at most `bound / 2^64`.
    #[inline]
    pub fn below_at(&self, domain: u64, counter: u64, bound: u64) -> u64 {
        assert!(bound > 0);
        ((self.word_at(domain, counter) as u128 * bound as u128) >> 64) as u64
    }

    #[inline]
    pub fn below(&self, counter: u64, bound: u64) -> u64 {
        self.below_at(0, counter, bound)
    }
}

/// Sequential cursor over one domain of a [`CounterRng`].
#[derive(Debug, Clone)]
pub struct Draws {
    rng: CounterRng,
    domain: u64,
    next: u64,
}

impl Draws {
    pub fn new(rng: CounterRng, domain: u64) -> Self {
        Draws {
            rng,
            domain,
            next: 0,
        }
    }

    pub fn word(&mut self) -> u64 {
        self.next += 1;
        self.rng.word_at(self.domain, self.next - 1)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next += 1;
        self.rng.below_at(self.domain, self.next - 1, bound)
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next += 1;
        self.rng.bernoulli_at(self.domain, self.next - 1, p)
    }

    /// Fisher-Yates.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        self.shuffle(&mut p);
        p
    }
}
