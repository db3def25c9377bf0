//! Exact expected misses of the Mark policy.
//!
//! Within a phase of the k-phase partition, a request to a marked page is
//! free, a new page (not cached at phase start) always faults, and the j-th
//! distinct old page faults with probability n_j/(k-j+1) where n_j counts the
//! new pages seen so far in the phase. The validity of this per-request law
//! rests on the exchangeability of Mark's uniform eviction among unmarked
//! pages; [`crate::engines::enumerate::enumerate_mark`] provides the
//! independent distribution-level cross-check.

use std::collections::BTreeSet;

use num::{One, Zero};

use crate::engines::ExpectedMisses;
use crate::page::{check_user_sequence, CacheConfig, PageId};
use crate::phase::phase_partition;
use crate::rational::{frac, harmonic, rat, Ratio};
use crate::Result;

/// Exact expected misses of Mark on `s`, phase boundaries taken from the
/// k-phase partition with the first phase starting at the first request.
pub fn expected_mark(cfg: CacheConfig, s: &[PageId]) -> Result<ExpectedMisses> {
    check_user_sequence(s)?;
    let k = cfg.k;
    let partition = phase_partition(s, k);
    let mut per_request = Vec::with_capacity(s.len());
    let mut prev_phase: BTreeSet<PageId> = BTreeSet::new();
    for idx in 0..partition.phase_count {
        let range = partition.phase_range(idx, s.len());
        let mut marked: BTreeSet<PageId> = BTreeSet::new();
        let mut new_count: i64 = 0;
        let mut old_served: i64 = 0;
        for &p in &s[range] {
            if marked.contains(&p) {
                per_request.push(Ratio::zero());
                continue;
            }
            marked.insert(p);
            if prev_phase.contains(&p) {
                old_served += 1;
                per_request.push(rat(new_count) * frac(1, k as i64 - old_served + 1));
            } else {
                new_count += 1;
                per_request.push(Ratio::one());
            }
        }
        prev_phase = marked;
    }
    Ok(ExpectedMisses::from_per_request(per_request))
}

/// Expected Mark misses of a steady "bad" phase of the shifted-phase family:
/// l new pages followed by k-l old ones, `l(1 + H_k - H_l)`.
pub fn mark_bad_phase_cost(k: usize, l: usize) -> Ratio {
    rat(l as i64) * (Ratio::one() + harmonic(k) - harmonic(l))
}

/// Expected Mark misses of a steady "good" phase: one new page, k-l+1 old
/// pages, l-2 new pages, `l - 1 + H_k - H_{l-1}`.
pub fn mark_good_phase_cost(k: usize, l: usize) -> Ratio {
    rat(l as i64 - 1) + harmonic(k) - harmonic(l - 1)
}
