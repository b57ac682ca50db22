//! Thread-pool fitness evaluation. `FUSEWAVE_THREADS` caps the pool;
//! results are written by position index, so outputs are identical for any
//! worker count.

use fusewave_core::pipeline::EvalStrategy;
use rayon::prelude::*;

pub const THREADS_ENV: &str = "FUSEWAVE_THREADS";

/// Worker count: the env cap if set and nonzero, otherwise the machine's
/// available parallelism.
pub fn thread_cap() -> usize {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

pub struct PoolStrategy {
    pool: rayon::ThreadPool,
}

impl PoolStrategy {
    pub fn with_threads(threads: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .expect("thread pool");
        PoolStrategy { pool }
    }

    pub fn from_env() -> Self {
        Self::with_threads(thread_cap())
    }
}

impl EvalStrategy for PoolStrategy {
    fn map_batch(
        &self,
        f: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
        positions: &[Vec<f64>],
    ) -> Vec<Vec<f64>> {
        self.pool
            .install(|| positions.par_iter().map(|p| f(p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_matches_serial_order() {
        let f = |p: &[f64]| vec![p[0] * 2.0, p[0] + 1.0];
        let positions: Vec<Vec<f64>> = (0..64).map(|i| vec![i as f64]).collect();
        let serial: Vec<Vec<f64>> = positions.iter().map(|p| f(p)).collect();
        for threads in [1, 4] {
            let pool = PoolStrategy::with_threads(threads);
            let got = pool.map_batch(&f, &positions);
            assert_eq!(got, serial);
        }
    }
}
