//! Seeded Monte Carlo estimation of randomized-policy miss counts.
//!
//! Each trial runs a faithful stochastic simulation on an independent
//! substream derived from (seed, trial index), so results are reproducible
//! given the seed and trivially parallelizable.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engines::RandomizedPolicy;
use crate::error::Error;
use crate::page::{check_user_sequence, CacheConfig, PageId};
use crate::rational::to_f64;
use crate::Result;

/// The RNG family backing the trials; part of each run's metadata.
pub const GENERATOR_FAMILY: &str = "chacha8(seed, stream=trial)";

/// Sample mean and standard error of miss counts over independent trials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    pub generator: &'static str,
}

/// Estimate the expected miss count of a randomized policy on `s`.
pub fn monte_carlo(
    policy: RandomizedPolicy,
    cfg: CacheConfig,
    s: &[PageId],
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_user_sequence(s)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let misses = match policy {
            RandomizedPolicy::Random => run_random(cfg.k, s, &mut rng),
            RandomizedPolicy::LruRandom => run_lru_random(cfg.k, s, &mut rng),
            RandomizedPolicy::Mark => run_mark(cfg.k, s, &mut rng),
            RandomizedPolicy::Eoa => run_eoa(cfg.k, s, &mut rng),
        } as f64;
        sum += misses;
        sum_sq += misses * misses;
    }
    let n = trials as f64;
    let mean = sum / n;
    let variance = if trials > 1 {
        (sum_sq - n * mean * mean) / (n - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        std_error: (variance.max(0.0) / n).sqrt(),
        trials,
        seed,
        generator: GENERATOR_FAMILY,
    })
}

/// Non-demand Random: a fault overwrites one of the k slots uniformly.
fn run_random(k: usize, s: &[PageId], rng: &mut impl Rng) -> usize {
    let mut slots: Vec<Option<PageId>> = vec![None; k];
    let mut misses = 0;
    for &p in s {
        if slots.contains(&Some(p)) {
            continue;
        }
        misses += 1;
        let idx = rng.gen_range(0..k);
        slots[idx] = Some(p);
    }
    misses
}

/// Non-demand LRU-Random: the i-th oldest slot is evicted w.p. 1/(i*H_k).
fn run_lru_random(k: usize, s: &[PageId], rng: &mut impl Rng) -> usize {
    // Weight 1/(i*H_k) for the i-th oldest; H_k cancels in WeightedIndex.
    let weights: Vec<f64> = (1..=k).map(|i| 1.0 / i as f64).collect();
    let law = WeightedIndex::new(&weights).expect("non-empty weights");
    // Most recent first; None = empty slot.
    let mut order: Vec<Option<PageId>> = vec![None; k];
    let mut misses = 0;
    for &p in s {
        if let Some(idx) = order.iter().position(|&q| q == Some(p)) {
            order.remove(idx);
            order.insert(0, Some(p));
            continue;
        }
        misses += 1;
        let oldest_rank = law.sample(rng) + 1; // 1 = oldest
        order.remove(k - oldest_rank);
        order.insert(0, Some(p));
    }
    misses
}

/// Mark: uniform eviction among unmarked cached pages; all pages unmark when
/// a fault finds every cached page marked.
fn run_mark(k: usize, s: &[PageId], rng: &mut impl Rng) -> usize {
    let mut cache: Vec<PageId> = Vec::with_capacity(k);
    let mut marked: Vec<bool> = Vec::with_capacity(k);
    let mut misses = 0;
    for &p in s {
        if let Some(idx) = cache.iter().position(|&q| q == p) {
            marked[idx] = true;
            continue;
        }
        misses += 1;
        if cache.len() == k {
            if marked.iter().all(|&m| m) {
                marked.iter_mut().for_each(|m| *m = false);
            }
            let unmarked: Vec<usize> = (0..k).filter(|&j| !marked[j]).collect();
            let victim = unmarked[rng.gen_range(0..unmarked.len())];
            cache.remove(victim);
            marked.remove(victim);
        }
        cache.push(p);
        marked.push(true);
    }
    misses
}

/// EOA: on every request one of the k conceptual slots is drawn uniformly;
/// if it holds a cached page other than the request, that page is evicted.
fn run_eoa(k: usize, s: &[PageId], rng: &mut impl Rng) -> usize {
    let mut cache: Vec<PageId> = Vec::with_capacity(k);
    let mut misses = 0;
    for &p in s {
        let hit = cache.contains(&p);
        if !hit {
            misses += 1;
        }
        let mut candidates: Vec<PageId> = cache.iter().copied().filter(|&q| q != p).collect();
        candidates.sort_unstable();
        let draw = rng.gen_range(0..k);
        if draw < candidates.len() {
            let victim = candidates[draw];
            cache.retain(|&q| q != victim);
        }
        if !hit {
            cache.push(p);
        }
    }
    misses
}

/// Convenience z-score of an estimate against an exact expectation.
pub fn z_score(estimate: &McEstimate, exact: &crate::rational::Ratio) -> f64 {
    if estimate.std_error == 0.0 {
        return 0.0;
    }
    (estimate.mean - to_f64(exact)) / estimate.std_error
}
