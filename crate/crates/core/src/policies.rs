//! Deterministic policy simulators: LRU, FIFO, FWF, Belady-OPT, Det-Step-LRU.
//!
//! Every simulator exposes a per-request miss/eviction trace so that adaptive
//! adversaries can observe it. Caches start empty (compulsory misses count),
//! except Det-Step-LRU which starts pre-filled with dummy pages as required
//! by its definition.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::page::{check_user_sequence, CacheConfig, PageId};
use crate::Result;

/// Default node budget for the brute-force offline search.
pub const DEFAULT_OPT_SEARCH_CAP: usize = 10_000_000;

/// Deterministic policy selector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetPolicyKind {
    /// Evict the least-recently-used page.
    Lru,
    /// Evict the page brought in earliest; hits do not reorder the queue.
    Fifo,
    /// Flush the whole cache on a fault with a full cache.
    Fwf,
    /// Belady's optimal offline rule: evict the page requested furthest in
    /// the future (never-again ties broken toward the smallest id).
    Belady,
    /// Det-Step-LRU with dummy ages `d`; requires `d ⊆ {k-i, .., k+i-1}` and
    /// `|d| = i` for the configured `(k, i)`.
    DetStepLru { d: BTreeSet<usize> },
}

impl DetPolicyKind {
    /// Short lowercase tag for reports and CLI selection.
    pub fn tag(&self) -> &'static str {
        match self {
            DetPolicyKind::Lru => "lru",
            DetPolicyKind::Fifo => "fifo",
            DetPolicyKind::Fwf => "fwf",
            DetPolicyKind::Belady => "belady",
            DetPolicyKind::DetStepLru { .. } => "det-step-lru",
        }
    }

    /// Demand-paging online policies usable by the adaptive lower-bound
    /// adversary. FWF is not demand paging; Belady is offline; Det-Step-LRU
    /// evicts dummies that may not be re-requested.
    pub fn is_adaptive_target(&self) -> bool {
        matches!(self, DetPolicyKind::Lru | DetPolicyKind::Fifo)
    }
}

/// What a single request evicted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Eviction {
    /// Nothing left the cache.
    None,
    /// One page was replaced.
    Page(PageId),
    /// FWF emptied the cache; all listed pages left at once.
    Flush(Vec<PageId>),
}

/// Per-request trace of a deterministic run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceResult {
    /// One flag per request; `true` = miss.
    pub miss_flags: Vec<bool>,
    /// One eviction record per request.
    pub evictions: Vec<Eviction>,
    /// Total number of misses.
    pub miss_count: usize,
    /// Cache content after the last request. Ordered by policy-relevant
    /// recency: LRU/FWF/Det-Step-LRU most-recent first, FIFO last-in first.
    pub final_state: Vec<PageId>,
}

impl TraceResult {
    fn push(&mut self, miss: bool, evicted: Eviction) {
        self.miss_flags.push(miss);
        self.evictions.push(evicted);
        if miss {
            self.miss_count += 1;
        }
    }

    fn new() -> Self {
        TraceResult {
            miss_flags: Vec::new(),
            evictions: Vec::new(),
            miss_count: 0,
            final_state: Vec::new(),
        }
    }
}

/// Run a deterministic policy over a sequence.
pub fn simulate(kind: &DetPolicyKind, cfg: CacheConfig, s: &[PageId]) -> Result<TraceResult> {
    match kind {
        DetPolicyKind::Lru => {
            check_user_sequence(s)?;
            Ok(simulate_lru(cfg.k, s))
        }
        DetPolicyKind::Fifo => {
            check_user_sequence(s)?;
            Ok(simulate_fifo(cfg.k, s))
        }
        DetPolicyKind::Fwf => {
            check_user_sequence(s)?;
            Ok(simulate_fwf(cfg.k, s))
        }
        DetPolicyKind::Belady => {
            check_user_sequence(s)?;
            Ok(simulate_belady(cfg.k, s))
        }
        DetPolicyKind::DetStepLru { d } => simulate_det_step_lru(cfg, d, s),
    }
}

fn simulate_lru(k: usize, s: &[PageId]) -> TraceResult {
    let mut trace = TraceResult::new();
    // Most-recent first.
    let mut cache: Vec<PageId> = Vec::with_capacity(k);
    for &p in s {
        match cache.iter().position(|&q| q == p) {
            Some(idx) => {
                cache.remove(idx);
                cache.insert(0, p);
                trace.push(false, Eviction::None);
            }
            None => {
                let evicted = if cache.len() == k {
                    Eviction::Page(cache.pop().unwrap())
                } else {
                    Eviction::None
                };
                cache.insert(0, p);
                trace.push(true, evicted);
            }
        }
    }
    trace.final_state = cache;
    trace
}

fn simulate_fifo(k: usize, s: &[PageId]) -> TraceResult {
    let mut trace = TraceResult::new();
    // Front = last-in, back = first-in. Hits leave the queue untouched.
    let mut queue: VecDeque<PageId> = VecDeque::with_capacity(k);
    for &p in s {
        if queue.contains(&p) {
            trace.push(false, Eviction::None);
        } else {
            let evicted = if queue.len() == k {
                Eviction::Page(queue.pop_back().unwrap())
            } else {
                Eviction::None
            };
            queue.push_front(p);
            trace.push(true, evicted);
        }
    }
    trace.final_state = queue.into_iter().collect();
    trace
}

fn simulate_fwf(k: usize, s: &[PageId]) -> TraceResult {
    let mut trace = TraceResult::new();
    let mut cache: Vec<PageId> = Vec::with_capacity(k);
    for &p in s {
        if cache.contains(&p) {
            cache.retain(|&q| q != p);
            cache.insert(0, p);
            trace.push(false, Eviction::None);
        } else {
            let evicted = if cache.len() == k {
                let flushed = std::mem::take(&mut cache);
                Eviction::Flush(flushed)
            } else {
                Eviction::None
            };
            cache.insert(0, p);
            trace.push(true, evicted);
        }
    }
    trace.final_state = cache;
    trace
}

fn simulate_belady(k: usize, s: &[PageId]) -> TraceResult {
    // next_use[j] = index of the next request to s[j] after j, or usize::MAX.
    let mut next_use = vec![usize::MAX; s.len()];
    let mut last_seen: HashMap<PageId, usize> = HashMap::new();
    for (j, &p) in s.iter().enumerate().rev() {
        next_use[j] = last_seen.get(&p).copied().unwrap_or(usize::MAX);
        last_seen.insert(p, j);
    }

    let mut trace = TraceResult::new();
    let mut cache: Vec<PageId> = Vec::with_capacity(k);
    // Next use index of each cached page.
    let mut cached_next: HashMap<PageId, usize> = HashMap::new();
    for (j, &p) in s.iter().enumerate() {
        if cache.contains(&p) {
            cached_next.insert(p, next_use[j]);
            let idx = cache.iter().position(|&q| q == p).unwrap();
            cache.remove(idx);
            cache.insert(0, p);
            trace.push(false, Eviction::None);
            continue;
        }
        let evicted = if cache.len() == k {
            // Furthest next use wins; never-again (usize::MAX) ties break
            // toward the smallest page id for determinism.
            let victim = *cache
                .iter()
                .max_by_key(|&&q| (cached_next[&q], std::cmp::Reverse(q)))
                .unwrap();
            cache.retain(|&q| q != victim);
            cached_next.remove(&victim);
            Eviction::Page(victim)
        } else {
            Eviction::None
        };
        cache.insert(0, p);
        cached_next.insert(p, next_use[j]);
        trace.push(true, evicted);
    }
    trace.final_state = cache;
    trace
}

/// Incremental Det-Step-LRU state: a recency line of requested (real)
/// pages plus the surviving pre-filled dummy pages. A real page's age is
/// its index in the recency line; a dummy's age is its initial age plus the
/// number of distinct reals requested so far.
struct DetStepLruSim {
    k: usize,
    i: usize,
    recency: Vec<PageId>,
    cached: HashSet<PageId>,
    /// (dummy page, initial age); dropped once evicted.
    dummies: Vec<(PageId, usize)>,
}

impl DetStepLruSim {
    fn new(cfg: CacheConfig, d: &BTreeSet<usize>) -> Result<Self> {
        let (k, i) = (cfg.k, cfg.i);
        if d.len() != i || d.iter().any(|&a| a < k - i || a >= k + i) {
            return Err(Error::InvalidParameter(format!(
                "Det-Step-LRU dummy ages {d:?} must be an i-subset of {{{}..{}}}",
                k - i,
                k + i - 1
            )));
        }
        let dummies: Vec<(PageId, usize)> = (0..k - i)
            .map(|j| (PageId::dummy(j), j))
            .chain(
                d.iter()
                    .enumerate()
                    .map(|(j, &a)| (PageId::dummy(k - i + j), a)),
            )
            .collect();
        let cached = dummies.iter().map(|&(p, _)| p).collect();
        Ok(DetStepLruSim {
            k,
            i,
            recency: Vec::new(),
            cached,
            dummies,
        })
    }

    fn page_at_age(&self, age: usize) -> Option<PageId> {
        if let Some(&p) = self.recency.get(age) {
            if self.cached.contains(&p) {
                return Some(p);
            }
        }
        let distinct = self.recency.len();
        self.dummies
            .iter()
            .find(|&&(_, init)| init + distinct == age)
            .map(|&(p, _)| p)
    }

    fn step(&mut self, p: PageId) -> Result<(bool, Eviction)> {
        if p.is_reserved() {
            return Err(Error::ReservedPage(p.0));
        }
        let (k, i) = (self.k, self.i);
        let age = self.recency.iter().position(|&q| q == p);
        let hit = self.cached.contains(&p);
        let mut evicted = Eviction::None;
        if !hit {
            // Victim by pre-request ages: the age-(k+i-1) page when cached
            // and the fault is to age >= k+i, otherwise the age-(k-i-1) page.
            let deep_miss = age.is_none_or(|a| a >= k + i);
            let victim = if deep_miss {
                self.page_at_age(k + i - 1)
                    .or_else(|| self.page_at_age(k - i - 1))
            } else {
                self.page_at_age(k - i - 1)
            };
            let victim = victim.ok_or_else(|| {
                Error::ConstructionFailed("Det-Step-LRU lost its age invariant".into())
            })?;
            self.cached.remove(&victim);
            self.dummies.retain(|&(q, _)| q != victim);
            self.cached.insert(p);
            evicted = Eviction::Page(victim);
        }
        if let Some(idx) = age {
            self.recency.remove(idx);
        }
        self.recency.insert(0, p);
        Ok((hit, evicted))
    }

    /// Ages of the cached pages, the quantity the mixed-strategy argument
    /// tracks per instance.
    fn cached_ages(&self) -> BTreeSet<usize> {
        let distinct = self.recency.len();
        let mut ages: BTreeSet<usize> = self
            .recency
            .iter()
            .enumerate()
            .filter(|(_, p)| self.cached.contains(p))
            .map(|(age, _)| age)
            .collect();
        ages.extend(self.dummies.iter().map(|&(_, init)| init + distinct));
        ages
    }

    /// Cached pages youngest first, surviving dummies trailing.
    fn state(&self) -> Vec<PageId> {
        let mut state: Vec<PageId> = self
            .recency
            .iter()
            .copied()
            .filter(|p| self.cached.contains(p))
            .collect();
        state.extend(self.dummies.iter().map(|&(p, _)| p));
        state
    }
}

fn simulate_det_step_lru(
    cfg: CacheConfig,
    d: &BTreeSet<usize>,
    s: &[PageId],
) -> Result<TraceResult> {
    let mut sim = DetStepLruSim::new(cfg, d)?;
    let mut trace = TraceResult::new();
    for &p in s {
        let (hit, evicted) = sim.step(p)?;
        trace.push(!hit, evicted);
    }
    trace.final_state = sim.state();
    Ok(trace)
}

/// The set of cached ages of a Det-Step-LRU instance after serving `s`.
/// Instances with different dummy-age sets keep different cached-age sets
/// along any common sequence.
pub fn det_step_lru_cached_ages(
    cfg: CacheConfig,
    d: &BTreeSet<usize>,
    s: &[PageId],
) -> Result<BTreeSet<usize>> {
    let mut sim = DetStepLruSim::new(cfg, d)?;
    for &p in s {
        sim.step(p)?;
    }
    Ok(sim.cached_ages())
}

/// Minimum misses over all offline demand-paging eviction strategies,
/// found by exhaustive search over eviction choices. Independent of the
/// Belady simulator by construction.
pub fn brute_force_opt(cfg: CacheConfig, s: &[PageId]) -> Result<usize> {
    brute_force_opt_with_cap(cfg, s, DEFAULT_OPT_SEARCH_CAP)
}

/// [`brute_force_opt`] with an explicit node budget.
pub fn brute_force_opt_with_cap(cfg: CacheConfig, s: &[PageId], cap: usize) -> Result<usize> {
    check_user_sequence(s)?;
    let mut visited = 0usize;
    let mut best = usize::MAX;
    let mut cache: BTreeSet<PageId> = BTreeSet::new();
    search_opt(cfg.k, s, 0, &mut cache, 0, &mut best, &mut visited, cap)?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn search_opt(
    k: usize,
    s: &[PageId],
    idx: usize,
    cache: &mut BTreeSet<PageId>,
    misses: usize,
    best: &mut usize,
    visited: &mut usize,
    cap: usize,
) -> Result<()> {
    *visited += 1;
    if *visited > cap {
        return Err(Error::SearchSpaceOverflow { cap });
    }
    if misses >= *best {
        return Ok(());
    }
    if idx == s.len() {
        *best = misses;
        return Ok(());
    }
    let p = s[idx];
    if cache.contains(&p) {
        return search_opt(k, s, idx + 1, cache, misses, best, visited, cap);
    }
    if cache.len() < k {
        cache.insert(p);
        search_opt(k, s, idx + 1, cache, misses + 1, best, visited, cap)?;
        cache.remove(&p);
        return Ok(());
    }
    let candidates: Vec<PageId> = cache.iter().copied().collect();
    for victim in candidates {
        cache.remove(&victim);
        cache.insert(p);
        search_opt(k, s, idx + 1, cache, misses + 1, best, visited, cap)?;
        cache.remove(&p);
        cache.insert(victim);
    }
    Ok(())
}

/// The page(s) evicted by the final request of a trace, if any.
/// Returns the flushed set for FWF flush events.
pub fn evicted_on_last(t: &TraceResult) -> Option<Vec<PageId>> {
    match t.evictions.last() {
        None | Some(Eviction::None) => None,
        Some(Eviction::Page(p)) => Some(vec![*p]),
        Some(Eviction::Flush(ps)) => Some(ps.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::seq;

    fn cfg(k: usize) -> CacheConfig {
        CacheConfig::new(k).unwrap()
    }

    #[test]
    fn lru_thrashes_on_cyclic_pattern() {
        let t = simulate(&DetPolicyKind::Lru, cfg(2), &seq(&[1, 2, 3, 1, 2])).unwrap();
        assert_eq!(t.miss_count, 5);
        assert_eq!(
            t.evictions[2..],
            [
                Eviction::Page(PageId(1)),
                Eviction::Page(PageId(2)),
                Eviction::Page(PageId(3))
            ]
        );
    }

    #[test]
    fn fifo_hit_does_not_reorder() {
        // The paper's base pair: [2,1] -> [1,2] and [1,2,1] -> [2,1].
        let t = simulate(&DetPolicyKind::Fifo, cfg(2), &seq(&[2, 1])).unwrap();
        assert_eq!(t.final_state, seq(&[1, 2]));
        let t = simulate(&DetPolicyKind::Fifo, cfg(2), &seq(&[1, 2, 1])).unwrap();
        assert_eq!(t.final_state, seq(&[2, 1]));
    }

    #[test]
    fn fwf_flushes_on_full_fault() {
        let t = simulate(&DetPolicyKind::Fwf, cfg(2), &seq(&[1, 2, 3, 1])).unwrap();
        assert_eq!(t.miss_count, 4);
        assert!(matches!(t.evictions[2], Eviction::Flush(_)));
        // Fault with a non-full cache inserts without flushing.
        assert_eq!(t.evictions[1], Eviction::None);
    }

    #[test]
    fn belady_matches_hand_simulation() {
        let t = simulate(&DetPolicyKind::Belady, cfg(2), &seq(&[1, 2, 3, 1])).unwrap();
        assert_eq!(t.miss_count, 3);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_opt(cfg(2), &seq(&[1, 2, 3, 1])).unwrap(), 3);
        assert_eq!(brute_force_opt(cfg(2), &seq(&[1, 1, 1])).unwrap(), 1);
        let mut s = Vec::new();
        for _ in 0..4 {
            s.extend(seq(&[1, 2, 1, 2]));
        }
        assert_eq!(brute_force_opt(cfg(2), &s).unwrap(), 2);
    }

    #[test]
    fn evicted_on_last_reports_lru_victim() {
        let t = simulate(&DetPolicyKind::Lru, cfg(2), &seq(&[1, 2, 3])).unwrap();
        assert_eq!(evicted_on_last(&t), Some(seq(&[1])));
        let t = simulate(&DetPolicyKind::Lru, cfg(2), &seq(&[1, 2, 1])).unwrap();
        assert_eq!(evicted_on_last(&t), None);
        let t = simulate(&DetPolicyKind::Fwf, cfg(2), &seq(&[1, 2, 3])).unwrap();
        let flushed = evicted_on_last(&t).unwrap();
        assert_eq!(flushed.len(), 2);
    }

    #[test]
    fn det_step_lru_rejects_bad_dummy_ages() {
        let cfg = CacheConfig::with_smoothing(4, 2).unwrap();
        let bad: BTreeSet<usize> = [0, 1].into_iter().collect();
        assert!(simulate(&DetPolicyKind::DetStepLru { d: bad }, cfg, &seq(&[1])).is_err());
    }

    #[test]
    fn det_step_lru_with_i_zero_is_lru() {
        let c = CacheConfig::with_smoothing(3, 0).unwrap();
        let s = seq(&[1, 2, 3, 4, 1, 2, 5, 1, 2, 3, 4, 5]);
        let step = simulate(&DetPolicyKind::DetStepLru { d: BTreeSet::new() }, c, &s).unwrap();
        let lru = simulate(&DetPolicyKind::Lru, c, &s).unwrap();
        assert_eq!(step.miss_flags, lru.miss_flags);
    }
}
