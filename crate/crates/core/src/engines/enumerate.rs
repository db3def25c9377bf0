//! Exact distribution-level enumerations of Mark and EOA.
//!
//! These evolve the full probability distribution over cache contents and
//! serve as independent cross-checks of the per-request closed forms in
//! [`crate::engines::mark`] and [`crate::engines::eoa`]. They share no code
//! with those engines.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::engines::{ExpectedMisses, DEFAULT_DISTRIBUTION_CAP};
use crate::error::Error;
use crate::page::{check_user_sequence, CacheConfig, PageId};
use crate::phase::phase_partition;
use crate::rational::{frac, Ratio};
use crate::Result;

type CacheSet = BTreeSet<PageId>;

/// Exact expected misses of Mark by enumerating which unmarked pages remain
/// cached, with uniform eviction among unmarked pages on each fault.
pub fn enumerate_mark(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let k = cfg.k;
    let partition = phase_partition(s, k);
    let mut boundary = vec![false; s.len()];
    for &b in &partition.boundaries {
        boundary[b] = true;
    }

    let mut dist: BTreeMap<CacheSet, Ratio> = BTreeMap::new();
    dist.insert(CacheSet::new(), Ratio::one());
    let mut marked: BTreeSet<PageId> = BTreeSet::new();
    let mut per_request = Vec::with_capacity(s.len());

    for (idx, &p) in s.iter().enumerate() {
        if boundary[idx] {
            marked.clear();
        }
        let mut fault = Ratio::zero();
        let mut next: BTreeMap<CacheSet, Ratio> = BTreeMap::new();
        for (state, mass) in &dist {
            if state.contains(&p) {
                *next.entry(state.clone()).or_insert_with(Ratio::zero) += mass;
                continue;
            }
            fault += mass;
            if state.len() < k {
                let mut t = state.clone();
                t.insert(p);
                *next.entry(t).or_insert_with(Ratio::zero) += mass;
                continue;
            }
            let unmarked: Vec<PageId> = state.difference(&marked).copied().collect();
            debug_assert!(!unmarked.is_empty(), "full cache with no unmarked victim");
            let share = mass * frac(1, unmarked.len() as i64);
            for victim in unmarked {
                let mut t = state.clone();
                t.remove(&victim);
                t.insert(p);
                *next.entry(t).or_insert_with(Ratio::zero) += &share;
            }
        }
        if next.len() > DEFAULT_DISTRIBUTION_CAP {
            return Err(Error::DistributionOverflow {
                size: next.len(),
                cap: DEFAULT_DISTRIBUTION_CAP,
            });
        }
        dist = next;
        marked.insert(p);
        per_request.push(fault);
    }
    Ok(ExpectedMisses::from_per_request(per_request))
}

/// Exact expected misses of EOA by enumerating cache contents under the
/// per-request eviction lottery: on each request, every cached page other
/// than the requested one is evicted with probability exactly 1/k.
pub fn enumerate_eoa(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let k = cfg.k as i64;
    let mut dist: BTreeMap<CacheSet, Ratio> = BTreeMap::new();
    dist.insert(CacheSet::new(), Ratio::one());
    let mut per_request = Vec::with_capacity(s.len());

    for &p in s {
        let mut fault = Ratio::zero();
        let mut next: BTreeMap<CacheSet, Ratio> = BTreeMap::new();
        for (state, mass) in &dist {
            if !state.contains(&p) {
                fault += mass;
            }
            let candidates: Vec<PageId> = state.iter().copied().filter(|&q| q != p).collect();
            let no_evict = Ratio::one() - frac(candidates.len() as i64, k);
            if !no_evict.is_zero() {
                let mut t = state.clone();
                t.insert(p);
                *next.entry(t).or_insert_with(Ratio::zero) += mass * &no_evict;
            }
            let share = mass * frac(1, k);
            for victim in candidates {
                let mut t = state.clone();
                t.remove(&victim);
                t.insert(p);
                *next.entry(t).or_insert_with(Ratio::zero) += &share;
            }
        }
        if next.len() > DEFAULT_DISTRIBUTION_CAP {
            return Err(Error::DistributionOverflow {
                size: next.len(),
                cap: DEFAULT_DISTRIBUTION_CAP,
            });
        }
        dist = next;
        per_request.push(fault);
    }
    Ok(ExpectedMisses::from_per_request(per_request))
}
