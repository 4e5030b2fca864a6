use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Seeded stream of standard normal variates.
///
/// Algorithm, fixed so that streams are reproducible bit for bit:
///
/// 1. Raw bits come from ChaCha20 seeded through `SeedableRng::seed_from_u64`.
/// 2. A uniform on `[0, 1)` is `(next_u64() >> 11) * 2⁻⁵³`.
/// 3. Normals come in pairs from the Marsaglia polar method: draw
///    `u = 2U₁ - 1`, `v = 2U₂ - 1` until `0 < s = u² + v² < 1`, then return
///    `u·f` followed by `v·f` with `f = √(-2 ln s / s)`.
#[derive(Debug, Clone)]
pub struct NormalStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        NormalStream {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

impl Iterator for NormalStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_normal())
    }
}
