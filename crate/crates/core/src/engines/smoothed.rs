//! Smoothed-LRU and Step-LRU: analytic hit probabilities and the
//! Det-Step-LRU mixed-strategy ensemble that realizes them.

use std::collections::BTreeSet;

use itertools::Itertools;
use num::{One, Zero};

use crate::engines::ExpectedMisses;
use crate::error::Error;
use crate::page::{check_user_sequence, request_ages, CacheConfig, PageId};
use crate::policies::{simulate, DetPolicyKind};
use crate::rational::{frac, rat, Ratio};
use crate::Result;

/// Default cap on the number of Det-Step-LRU instances per ensemble.
pub const DEFAULT_ENSEMBLE_CAP: usize = 10_000;

/// Hit probability of Smoothed-LRU(k, i) for a request of the given age
/// (`None` = infinite age): 1 below k-i, (k+i-a)/(2i+1) in the window,
/// 0 at and beyond k+i.
pub fn smoothed_lru_hit_prob(age: Option<usize>, cfg: CacheConfig) -> Ratio {
    let (k, i) = (cfg.k, cfg.i);
    match age {
        None => Ratio::zero(),
        Some(a) if a < k - i => Ratio::one(),
        Some(a) if a < k + i => frac((k + i - a) as i64, (2 * i + 1) as i64),
        Some(_) => Ratio::zero(),
    }
}

/// Hit probability of Step-LRU(k, i): 1 below k-i, exactly 1/2 in the
/// window, 0 at and beyond k+i.
pub fn step_lru_hit_prob(age: Option<usize>, cfg: CacheConfig) -> Ratio {
    let (k, i) = (cfg.k, cfg.i);
    match age {
        None => Ratio::zero(),
        Some(a) if a < k - i => Ratio::one(),
        Some(a) if a < k + i => frac(1, 2),
        Some(_) => Ratio::zero(),
    }
}

/// Exact expected misses of Smoothed-LRU(k, i) on `s` via the age law.
pub fn expected_smoothed_lru(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let per_request = request_ages(s)
        .into_iter()
        .map(|age| Ratio::one() - smoothed_lru_hit_prob(age, cfg))
        .collect();
    Ok(ExpectedMisses::from_per_request(per_request))
}

/// Exact expected misses of Step-LRU(k, i) on `s` via the age law.
pub fn expected_step_lru(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let per_request = request_ages(s)
        .into_iter()
        .map(|age| Ratio::one() - step_lru_hit_prob(age, cfg))
        .collect();
    Ok(ExpectedMisses::from_per_request(per_request))
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let mut acc = 1usize;
    for j in 0..r.min(n - r) {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Average Det-Step-LRU(k, j, D) traces uniformly over all age sets D.
/// Realizes Step-LRU(k, j) exactly.
pub fn step_lru_ensemble(cfg: CacheConfig, s: &[PageId], cap: usize) -> Result<ExpectedMisses> {
    let (k, j) = (cfg.k, cfg.i);
    let count = binomial(2 * j, j);
    if count > cap {
        return Err(Error::AuditSpaceOverflow { cap });
    }
    let weight = frac(1, count as i64);
    let mut per_request = vec![Ratio::zero(); s.len()];
    for d in (k - j..k + j).combinations(j) {
        let ages: BTreeSet<usize> = d.into_iter().collect();
        let trace = simulate(&DetPolicyKind::DetStepLru { d: ages }, cfg, s)?;
        for (slot, &miss) in per_request.iter_mut().zip(trace.miss_flags.iter()) {
            if miss {
                *slot += &weight;
            }
        }
    }
    Ok(ExpectedMisses::from_per_request(per_request))
}

/// The Smoothed-LRU mixed strategy: combine Step-LRU ensembles for
/// j = 0..=i with weights (1, 2, 2, ..., 2)/(2i+1). Must agree with
/// [`expected_smoothed_lru`] exactly, per-request.
pub fn smoothed_lru_ensemble(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    smoothed_lru_ensemble_with_cap(cfg, s, DEFAULT_ENSEMBLE_CAP)
}

/// [`smoothed_lru_ensemble`] with an explicit instance cap per Step-LRU level.
pub fn smoothed_lru_ensemble_with_cap(
    cfg: CacheConfig,
    s: &[PageId],
    cap: usize,
) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let i = cfg.i;
    let denom = rat((2 * i + 1) as i64);
    let mut per_request = vec![Ratio::zero(); s.len()];
    for j in 0..=i {
        let level = CacheConfig::with_smoothing(cfg.k, j)?;
        let step = step_lru_ensemble(level, s, cap)?;
        let weight = if j == 0 { rat(1) } else { rat(2) } / &denom;
        for (slot, p) in per_request.iter_mut().zip(step.per_request.iter()) {
            *slot += p * &weight;
        }
    }
    Ok(ExpectedMisses::from_per_request(per_request))
}
