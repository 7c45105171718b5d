//! Deterministic 64-bit PRNG for instance generation and trials.
//!
//! SplitMix64 in counter form: output `k` is a fixed avalanche mix of
//! `seed + (k+1) * 0x9E3779B97F4A7C15`, so a stream is a pure function of
//! its seed and position. Per-trial substreams are seeded with
//! `seed XOR trial_index`, which makes trial results independent of
//! scheduling order when campaigns run in parallel.
//!
//! Gaussian variates use the polar Box-Muller method; streams therefore
//! reproduce bit-for-bit only across implementations that use the same
//! method, not merely the same distribution.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare_normal: None }
    }

    /// Substream for one trial of a seeded campaign.
    pub fn substream(seed: u64, trial_index: u64) -> Self {
        Self::new(seed ^ trial_index)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the real interval `[-gamma, gamma]`.
    pub fn uniform_interval(&mut self, gamma: f64) -> f64 {
        gamma * (2.0 * self.next_f64() - 1.0)
    }

    /// The two-point law on `{-gamma, +gamma}`.
    pub fn rademacher(&mut self, gamma: f64) -> f64 {
        if self.next_u64() & 1 == 0 {
            gamma
        } else {
            -gamma
        }
    }

    pub fn bernoulli_bit(&mut self) -> i64 {
        (self.next_u64() & 1) as i64
    }

    /// Standard normal via the polar Box-Muller transform; the second
    /// variate of each accepted pair is cached.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn normal(&mut self, sigma: f64) -> f64 {
        sigma * self.standard_normal()
    }
}
