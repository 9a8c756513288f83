//! Deterministic random stream used by every randomized routine in the
//! crate. xoshiro256** with SplitMix64 seed expansion; both algorithms are
//! fixed by their published constants, so identical seeds reproduce
//! identical experiment outputs on any platform.

/// xoshiro256** stream (Blackman & Vigna constants), seeded via SplitMix64.
#[derive(Clone, Debug)]
pub struct RandomStream {
    s: [u64; 4],
    gauss_cache: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        // SplitMix64 expansion: gamma = 0x9e3779b97f4a7c15.
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        };
        let s = [next(), next(), next(), next()];
        RandomStream {
            s,
            gauss_cache: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
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

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0, n) by rejection (unbiased).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Standard normal draw (Marsaglia polar method, cached pair).
    pub fn normal(&mut self) -> f64 {
        if let Some(g) = self.gauss_cache.take() {
            return g;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.gauss_cache = Some(v * f);
                return u * f;
            }
        }
    }

    /// Derive an independent stream for a sub-experiment; mixing the label
    /// through the generator keeps chains decorrelated.
    pub fn substream(&mut self, label: u64) -> RandomStream {
        RandomStream::new(self.next_u64() ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}
