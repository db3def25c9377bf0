//! Shared trace generators for the benchmarks.

use pagesmooth::page::PageId;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Reproducible trace with geometric-ish reuse: hot pages dominate.
pub fn skewed_trace(len: usize, universe: u64, seed: u64) -> Vec<PageId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| {
            let mut p = 0u64;
            while p + 1 < universe && rng.gen_bool(0.5) {
                p += 1;
            }
            PageId(p)
        })
        .collect()
}

/// Cyclic trace over `universe` pages, the adversarial pattern for LRU/FIFO.
pub fn cyclic_trace(len: usize, universe: u64) -> Vec<PageId> {
    (0..len as u64).map(|t| PageId(t % universe)).collect()
}
