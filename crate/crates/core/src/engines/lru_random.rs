//! Exact expected misses of LRU-Random.
//!
//! States are recency-ordered slot lists (most recent first). Upon a miss
//! the i-th oldest slot is evicted with probability 1/(i·H_k); by
//! construction these probabilities sum to one. The engine follows the
//! paper's non-demand reading by default: the eviction law applies even
//! while some slots are still empty. A demand variant (fill first, apply the
//! law only when full) backs the randomized lower-bound adversary.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::engines::{ExpectedMisses, DEFAULT_DISTRIBUTION_CAP};
use crate::error::Error;
use crate::page::{check_user_sequence, CacheConfig, PageId};
use crate::rational::{frac, harmonic, Ratio};
use crate::Result;

/// Recency-ordered state, most recent first; EMPTY slots trail.
type Recency = Vec<PageId>;

/// Eviction probability of the i-th oldest slot (1-indexed) for cache size k.
pub fn eviction_probability(k: usize, i: usize) -> Ratio {
    assert!(i >= 1 && i <= k);
    frac(1, i as i64) / harmonic(k)
}

/// The full eviction law, oldest slot first. Sums to exactly one.
pub fn eviction_law(k: usize) -> Vec<Ratio> {
    (1..=k).map(|i| eviction_probability(k, i)).collect()
}

/// Evolving state distribution for LRU-Random.
#[derive(Debug, Clone)]
pub struct LruRandomEngine {
    k: usize,
    demand: bool,
    cap: usize,
    law: Vec<Ratio>,
    dist: BTreeMap<Recency, Ratio>,
}

impl LruRandomEngine {
    /// Non-demand engine (the paper's definition) over an empty cache.
    pub fn new(cfg: CacheConfig) -> Self {
        Self::with_options(cfg, false, DEFAULT_DISTRIBUTION_CAP)
    }

    /// Engine with explicit demand semantics and distribution cap.
    pub fn with_options(cfg: CacheConfig, demand: bool, cap: usize) -> Self {
        let mut dist = BTreeMap::new();
        dist.insert(vec![PageId::EMPTY; cfg.k], Ratio::one());
        LruRandomEngine {
            k: cfg.k,
            demand,
            cap,
            law: eviction_law(cfg.k),
            dist,
        }
    }

    /// Serve one request; returns its exact fault probability.
    pub fn step(&mut self, p: PageId) -> Result<Ratio> {
        if p.is_reserved() {
            return Err(Error::ReservedPage(p.0));
        }
        let mut fault = Ratio::zero();
        let mut next: BTreeMap<Recency, Ratio> = BTreeMap::new();
        for (state, mass) in &self.dist {
            if let Some(idx) = state.iter().position(|&q| q == p) {
                let mut t = state.clone();
                t.remove(idx);
                t.insert(0, p);
                *next.entry(t).or_insert_with(Ratio::zero) += mass;
                continue;
            }
            fault += mass;
            if self.demand {
                if let Some(idx) = state.iter().rposition(|&q| q == PageId::EMPTY) {
                    let mut t = state.clone();
                    t.remove(idx);
                    t.insert(0, p);
                    *next.entry(t).or_insert_with(Ratio::zero) += mass;
                    continue;
                }
            }
            // The i-th oldest slot is index k - i from the front.
            for (i, weight) in self.law.iter().enumerate() {
                let victim_idx = self.k - 1 - i;
                let mut t = state.clone();
                t.remove(victim_idx);
                t.insert(0, p);
                *next.entry(t).or_insert_with(Ratio::zero) += mass * weight;
            }
        }
        if next.len() > self.cap {
            return Err(Error::DistributionOverflow {
                size: next.len(),
                cap: self.cap,
            });
        }
        self.dist = next;
        Ok(fault)
    }

    /// Probability that `q` is *not* cached under the current distribution.
    pub fn not_in_cache_prob(&self, q: PageId) -> Ratio {
        self.dist
            .iter()
            .filter(|(state, _)| !state.contains(&q))
            .fold(Ratio::zero(), |acc, (_, m)| acc + m)
    }

    /// Total probability mass (always exactly one).
    pub fn total_mass(&self) -> Ratio {
        self.dist.values().fold(Ratio::zero(), |a, b| a + b)
    }

    /// Number of states currently carrying mass.
    pub fn state_count(&self) -> usize {
        self.dist.len()
    }
}

/// Exact expected misses of LRU-Random (non-demand) on `s`.
pub fn expected_lru_random(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let mut engine = LruRandomEngine::new(cfg);
    let mut per_request = Vec::with_capacity(s.len());
    for &p in s {
        per_request.push(engine.step(p)?);
    }
    Ok(ExpectedMisses::from_per_request(per_request))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::seq;
    use crate::rational::rat;

    #[test]
    fn law_for_k3_is_6_3_2_over_11() {
        let law = eviction_law(3);
        assert_eq!(law, vec![frac(6, 11), frac(3, 11), frac(2, 11)]);
        let total: Ratio = law.into_iter().fold(Ratio::zero(), |a, b| a + b);
        assert_eq!(total, rat(1));
    }

    #[test]
    fn immediate_rerequest_hits() {
        let cfg = CacheConfig::new(2).unwrap();
        let e = expected_lru_random(cfg, &seq(&[5, 5])).unwrap();
        assert_eq!(e.value, rat(1));
    }

    #[test]
    fn mass_stays_normalized() {
        let cfg = CacheConfig::new(2).unwrap();
        let mut engine = LruRandomEngine::new(cfg);
        for &p in &seq(&[0, 1, 2, 0, 1, 2, 0]) {
            engine.step(p).unwrap();
            assert_eq!(engine.total_mass(), rat(1));
        }
    }

    #[test]
    fn k2_miss_splits_two_thirds_one_third() {
        let cfg = CacheConfig::new(2).unwrap();
        let mut engine = LruRandomEngine::with_options(cfg, true, 1000);
        engine.step(PageId(0)).unwrap();
        engine.step(PageId(1)).unwrap();
        engine.step(PageId(2)).unwrap();
        // From [1 0]: evict 0 w.p. 2/3 -> {2,1}; evict 1 w.p. 1/3 -> {2,0}.
        assert_eq!(engine.not_in_cache_prob(PageId(0)), frac(2, 3));
        assert_eq!(engine.not_in_cache_prob(PageId(1)), frac(1, 3));
        assert_eq!(engine.not_in_cache_prob(PageId(2)), rat(0));
    }
}
