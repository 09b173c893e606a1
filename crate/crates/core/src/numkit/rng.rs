//! Counter-based Gaussian stream: SplitMix64 keyed by the seed, Box–Muller
//! on top. `libm` keeps the transcendental functions bit-identical across
//! platforms.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic standard-normal stream.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    key: u64,
    counter: u64,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            key: seed,
            counter: 0,
            spare: None,
        }
    }

    /// Stream `index` derived from `seed`. Stream 0 is `seed` itself; the
    /// index is hashed before the xor so small seeds and small indices never
    /// alias each other.
    pub fn substream(seed: u64, index: u64) -> Self {
        Self::new(seed ^ mix64(index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform on `(0, 1]`.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.next_uniform() * n as f64).ceil() as usize).clamp(1, n) - 1
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * libm::sin(angle));
        radius * libm::cos(angle)
    }

    pub fn gaussians(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_gaussian()).collect()
    }
}

impl Iterator for GaussianStream {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        Some(self.next_gaussian())
    }
}

/// Convenience: `gaussian_stream(seed)` as a plain iterator.
pub fn gaussian_stream(seed: u64) -> GaussianStream {
    GaussianStream::new(seed)
}
