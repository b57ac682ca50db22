//! Seeded random stream with a pinned wire format.
//!
//! The optimizer's reproducibility contract is that a seed fully determines
//! every draw, with one 64-bit ChaCha8 output consumed per unit draw. The
//! mapping `u64 -> [0, 1)` keeps the top 53 bits, so the stream can be
//! replayed exactly from any ChaCha8 implementation.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct UnitRng {
    inner: ChaCha8Rng,
}

impl UnitRng {
    pub fn from_seed(seed: u64) -> Self {
        UnitRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw in `[0, 1)`; consumes exactly one `u64` of the stream.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.inner.next_u64() >> 11) as f64 * SCALE
    }

    /// Uniform index in `[0, n)` from a single unit draw.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        let u = self.next_unit();
        ((u * n as f64) as usize).min(n - 1)
    }
}
