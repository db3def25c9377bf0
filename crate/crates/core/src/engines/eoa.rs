//! Exact expected misses of Evict-On-Access.
//!
//! A cached page survives each request to another page with probability
//! 1 - 1/k, so a request with reuse distance d hits with probability
//! (1 - 1/k)^d. The reuse distance counts *requests* since the previous
//! request to the page (not distinct pages), matching the per-request
//! eviction lottery; first requests have infinite distance and always miss.

use std::collections::HashMap;

use num::One;

use crate::engines::ExpectedMisses;
use crate::page::{check_user_sequence, CacheConfig, PageId};
use crate::rational::{frac, pow, Ratio};
use crate::Result;

/// Raw reuse distances of each request: requests since the previous request
/// to the same page, `None` for first requests.
pub fn reuse_distances(s: &[PageId]) -> Vec<Option<usize>> {
    let mut last: HashMap<PageId, usize> = HashMap::new();
    let mut out = Vec::with_capacity(s.len());
    for (idx, &p) in s.iter().enumerate() {
        out.push(last.get(&p).map(|&prev| idx - prev - 1));
        last.insert(p, idx);
    }
    out
}

/// Exact expected misses of EOA on `s`.
pub fn expected_eoa(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let survive = Ratio::one() - frac(1, cfg.k as i64);
    let per_request = reuse_distances(s)
        .into_iter()
        .map(|d| match d {
            None => Ratio::one(),
            Some(d) => Ratio::one() - pow(&survive, d),
        })
        .collect();
    Ok(ExpectedMisses::from_per_request(per_request))
}
