//! Counter-based pseudorandom generator with independent streams.
//!
//! The output sequence is the splitmix64 hash of a 64-bit counter walking a
//! Weyl sequence, with the starting point derived from a (seed, stream) pair.
//! Every output is a pure function of (seed, stream, counter), so replicas
//! can derive their own streams up front and run without coordination, and a
//! run is reproduced exactly by its seed.
//!
//! Bounded integers use Lemire's multiply-shift rejection method, so draws
//! are exactly uniform.

/// Algorithm name recorded in output metadata.
pub const ALGORITHM: &str = "splitmix64";

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer (Steele, Lea, Flood 2014).
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct CounterRng {
    seed: u64,
    stream: u64,
    base: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        // Hash seed and stream separately so that (s, 0) and (0, s) differ.
        let base = mix(mix(seed).wrapping_add(mix(stream ^ GOLDEN)));
        CounterRng {
            seed,
            stream,
            base,
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of 64-bit outputs drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// Derive an independent child stream. Children of distinct indices and
    /// streams of distinct parents are distinct by construction.
    pub fn substream(&self, index: u64) -> CounterRng {
        CounterRng::new(self.seed, mix(self.stream).wrapping_add(index).wrapping_add(1))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.base.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in 0..n, exactly (Lemire's method).
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let mut m = (self.next_u64() as u128) * (n as u128);
        let mut lo = m as u64;
        if lo < n {
            let threshold = n.wrapping_neg() % n;
            while lo < threshold {
                m = (self.next_u64() as u128) * (n as u128);
                lo = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Uniform index into a collection of length n.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Fair ±1 spin.
    #[inline]
    pub fn spin(&mut self) -> i8 {
        if self.next_u64() >> 63 == 0 {
            1
        } else {
            -1
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }

    /// `count` distinct values from 0..n, by partial Fisher-Yates.
    pub fn sample_distinct(&mut self, n: usize, count: usize) -> Vec<usize> {
        assert!(count <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + self.index(n - i);
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }
}
