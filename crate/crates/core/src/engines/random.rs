//! Exact expected misses of the Random policy.
//!
//! States are unordered slot multisets; empty slots carry the
//! [`PageId::EMPTY`] sentinel and sort last. In the non-demand variant a
//! fault overwrites one of the k slots uniformly at random even when some
//! slots are still empty; the demand variant fills empty slots first and
//! evicts uniformly among cached pages only when the cache is full.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::engines::{ExpectedMisses, DEFAULT_DISTRIBUTION_CAP};
use crate::error::Error;
use crate::page::{check_user_sequence, CacheConfig, PageId};
use crate::rational::{frac, Ratio};
use crate::Result;

/// Canonical Random state: slots sorted ascending, EMPTY sentinels last.
type Slots = Vec<PageId>;

/// Evolving state distribution for the Random policy.
#[derive(Debug, Clone)]
pub struct RandomEngine {
    k: usize,
    demand: bool,
    cap: usize,
    dist: BTreeMap<Slots, Ratio>,
}

impl RandomEngine {
    /// Fresh engine over an empty cache.
    pub fn new(cfg: CacheConfig, demand: bool) -> Self {
        Self::with_cap(cfg, demand, DEFAULT_DISTRIBUTION_CAP)
    }

    /// Fresh engine with an explicit distribution-size cap.
    pub fn with_cap(cfg: CacheConfig, demand: bool, cap: usize) -> Self {
        let mut dist = BTreeMap::new();
        dist.insert(vec![PageId::EMPTY; cfg.k], Ratio::one());
        RandomEngine {
            k: cfg.k,
            demand,
            cap,
            dist,
        }
    }

    /// Serve one request; returns its exact fault probability.
    pub fn step(&mut self, p: PageId) -> Result<Ratio> {
        if p.is_reserved() {
            return Err(Error::ReservedPage(p.0));
        }
        let mut fault = Ratio::zero();
        let mut next: BTreeMap<Slots, Ratio> = BTreeMap::new();
        let per_slot = frac(1, self.k as i64);
        for (state, mass) in &self.dist {
            if state.contains(&p) {
                *next.entry(state.clone()).or_insert_with(Ratio::zero) += mass;
                continue;
            }
            fault += mass;
            if self.demand {
                if let Some(idx) = state.iter().position(|&q| q == PageId::EMPTY) {
                    let mut t = state.clone();
                    t[idx] = p;
                    t.sort_unstable();
                    *next.entry(t).or_insert_with(Ratio::zero) += mass;
                    continue;
                }
            }
            let share = mass * &per_slot;
            for idx in 0..self.k {
                let mut t = state.clone();
                t[idx] = p;
                t.sort_unstable();
                *next.entry(t).or_insert_with(Ratio::zero) += &share;
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

/// Exact expected misses of Random on `s`. `demand = false` is the default
/// non-demand variant; `demand = true` evicts only when the cache is full.
pub fn expected_random(cfg: CacheConfig, s: &[PageId], demand: bool) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let mut engine = RandomEngine::new(cfg, demand);
    let mut per_request = Vec::with_capacity(s.len());
    for &p in s {
        per_request.push(engine.step(p)?);
    }
    Ok(ExpectedMisses::from_per_request(per_request))
}
