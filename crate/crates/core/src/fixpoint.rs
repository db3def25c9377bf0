//! Kleene fixpoint for the LRU-Random state-distance table at k = 2, and the
//! mechanical one-edit bound replay built on it.
//!
//! The table assigns to each canonical ordered pair of full cache states an
//! upper bound on the worst-case difference in expected misses when running
//! LRU-Random from the two states. It is the least fixpoint of
//! `d(s,s') = max_p { f_p(s,s') + Δ(D_p(s), D_p(s')) }`, where `f_p` is the
//! immediate fault difference and `Δ` is a minimum-cost mass transfer
//! between the successor distributions. The iteration converges
//! geometrically, so after the tolerance is reached each entry is snapped to
//! the nearest small rational and the snapped table is verified to be an
//! exact fixpoint.

use num::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::audit::{exhaustive_smoothness, EngineEvaluator, EngineKind, MissEvaluator};
use crate::edit::{alphabet_of_size, neighborhood};
use crate::error::Error;
use crate::page::{CacheConfig, PageId, RequestSequence};
use crate::rational::{best_approx, frac, rat, Ratio};
use crate::Result;

/// Default convergence tolerance (1e-12).
pub fn default_tolerance() -> Ratio {
    Ratio::new(1.into(), 1_000_000_000_000i64.into())
}

const MAX_KLEENE_ROUNDS: usize = 400;
const SNAP_MAX_DENOMINATOR: u64 = 64;

/// A full k=2 cache state, most recently used page first.
pub type State2 = [PageId; 2];

/// Canonical shape of an ordered state pair (second state renamed through
/// the first): the six table rows, plus the disjoint case that the table
/// never needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairShape {
    /// ([0 1], [0 1])
    Same,
    /// ([0 1], [0 2])
    KeepMruNewLru,
    /// ([0 1], [1 0])
    Swapped,
    /// ([0 1], [1 2])
    LruToMruNewLru,
    /// ([0 1], [2 0])
    NewMruKeepLru,
    /// ([0 1], [2 1])
    NewMruKeepMru,
    /// No common page; the table assigns no distance.
    Disjoint,
}

impl PairShape {
    const TABLE: [PairShape; 6] = [
        PairShape::Same,
        PairShape::KeepMruNewLru,
        PairShape::Swapped,
        PairShape::LruToMruNewLru,
        PairShape::NewMruKeepLru,
        PairShape::NewMruKeepMru,
    ];

    fn index(self) -> Option<usize> {
        Self::TABLE.iter().position(|&s| s == self)
    }

    /// The paper-style label, e.g. `[0 1] vs [2 0]`.
    pub fn label(self) -> &'static str {
        match self {
            PairShape::Same => "[0 1] vs [0 1]",
            PairShape::KeepMruNewLru => "[0 1] vs [0 2]",
            PairShape::Swapped => "[0 1] vs [1 0]",
            PairShape::LruToMruNewLru => "[0 1] vs [1 2]",
            PairShape::NewMruKeepLru => "[0 1] vs [2 0]",
            PairShape::NewMruKeepMru => "[0 1] vs [2 1]",
            PairShape::Disjoint => "disjoint",
        }
    }
}

/// Classify an ordered pair of states by renaming through the first state.
pub fn pair_shape(s: State2, t: State2) -> PairShape {
    let rename = |p: PageId| -> u8 {
        if p == s[0] {
            0
        } else if p == s[1] {
            1
        } else {
            2
        }
    };
    let a = rename(t[0]);
    let b = rename(t[1]);
    // Two distinct fresh pages in t collapse to (2, 2) here; distinguish.
    let b = if a == 2 && b == 2 && t[0] != t[1] {
        3
    } else {
        b
    };
    match (a, b) {
        (0, 1) => PairShape::Same,
        (0, 2) => PairShape::KeepMruNewLru,
        (1, 0) => PairShape::Swapped,
        (1, 2) => PairShape::LruToMruNewLru,
        (2, 0) => PairShape::NewMruKeepLru,
        (2, 1) => PairShape::NewMruKeepMru,
        _ => PairShape::Disjoint,
    }
}

/// The six-entry distance table over canonical state pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    entries: [Ratio; 6],
}

impl DistanceTable {
    fn zero() -> Self {
        DistanceTable {
            entries: std::array::from_fn(|_| Ratio::zero()),
        }
    }

    /// Distance between two concrete states, when the table covers their
    /// shape (states sharing at least one page).
    pub fn distance(&self, s: State2, t: State2) -> Option<Ratio> {
        pair_shape(s, t)
            .index()
            .map(|idx| self.entries[idx].clone())
    }

    /// Table entry by shape.
    pub fn entry(&self, shape: PairShape) -> Option<&Ratio> {
        shape.index().map(|idx| &self.entries[idx])
    }

    /// (label, value) rows in canonical order.
    pub fn rows(&self) -> Vec<(&'static str, Ratio)> {
        PairShape::TABLE
            .iter()
            .zip(self.entries.iter())
            .map(|(s, v)| (s.label(), v.clone()))
            .collect()
    }
}

/// Successor distribution of LRU-Random (k=2) on a request to `p` from a
/// full state: a hit moves `p` to the front; a miss evicts the LRU page
/// with probability 2/3 and the MRU page with probability 1/3.
fn transition(s: State2, p: PageId) -> Vec<(State2, Ratio)> {
    if s[0] == p {
        vec![(s, Ratio::one())]
    } else if s[1] == p {
        vec![([p, s[0]], Ratio::one())]
    } else {
        vec![([p, s[0]], frac(2, 3)), ([p, s[1]], frac(1, 3))]
    }
}

/// Immediate fault-count difference `[p not in t] - [p not in s]`.
fn fault_diff(s: State2, t: State2, p: PageId) -> Ratio {
    let miss = |state: State2| i64::from(!state.contains(&p));
    rat(miss(t) - miss(s))
}

/// Minimum-cost mass transfer between two successor distributions, with
/// per-pair costs from the table. `None` when every coupling crosses a
/// disjoint pair. Supports have at most two states, so the two extreme
/// couplings are enumerated directly.
fn emd(table: &DistanceTable, from: &[(State2, Ratio)], to: &[(State2, Ratio)]) -> Option<Ratio> {
    let d = |u: State2, v: State2| table.distance(u, v);
    match (from.len(), to.len()) {
        (1, _) => {
            let mut total = Ratio::zero();
            for (v, w) in to {
                total += w * d(from[0].0, *v)?;
            }
            Some(total)
        }
        (_, 1) => {
            let mut total = Ratio::zero();
            for (u, w) in from {
                total += w * d(*u, to[0].0)?;
            }
            Some(total)
        }
        (2, 2) => {
            // Both carry masses (2/3, 1/3) in order.
            let third = frac(1, 3);
            let diagonal = || -> Option<Ratio> {
                Some(frac(2, 3) * d(from[0].0, to[0].0)? + &third * d(from[1].0, to[1].0)?)
            };
            let cross = || -> Option<Ratio> {
                Some(
                    &third * d(from[0].0, to[0].0)?
                        + &third * d(from[0].0, to[1].0)?
                        + &third * d(from[1].0, to[0].0)?,
                )
            };
            match (diagonal(), cross()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) => Some(a),
                (None, Some(b)) => Some(b),
                (None, None) => None,
            }
        }
        _ => None,
    }
}

/// Representative concrete pair for each table row.
fn representatives() -> [(State2, State2); 6] {
    let p = |n: u64| PageId(n);
    [
        ([p(0), p(1)], [p(0), p(1)]),
        ([p(0), p(1)], [p(0), p(2)]),
        ([p(0), p(1)], [p(1), p(0)]),
        ([p(0), p(1)], [p(1), p(2)]),
        ([p(0), p(1)], [p(2), p(0)]),
        ([p(0), p(1)], [p(2), p(1)]),
    ]
}

/// One application of the monotone map underlying the table.
fn apply_map(table: &DistanceTable) -> DistanceTable {
    let probes: [PageId; 4] = [PageId(0), PageId(1), PageId(2), PageId(3)];
    let mut out = DistanceTable::zero();
    for (idx, &(s, t)) in representatives().iter().enumerate() {
        let mut best = Ratio::zero();
        for &p in &probes {
            let du = transition(s, p);
            let dv = transition(t, p);
            if let Some(cost) = emd(table, &du, &dv) {
                let arm = fault_diff(s, t, p) + cost;
                if arm > best {
                    best = arm;
                }
            }
        }
        out.entries[idx] = best;
    }
    out
}

/// Compute the least fixpoint of the distance inequality by Kleene iteration
/// from the all-zero table. Only k = 2 is supported; the state space and the
/// method both stop there.
pub fn lru_random_distance_fixpoint(k: usize, tolerance: &Ratio) -> Result<DistanceTable> {
    if k != 2 {
        return Err(Error::InvalidParameter(
            "the distance-table fixpoint is defined for k = 2 only".into(),
        ));
    }
    let mut current = DistanceTable::zero();
    for _ in 0..MAX_KLEENE_ROUNDS {
        let next = apply_map(&current);
        for (new, old) in next.entries.iter().zip(current.entries.iter()) {
            debug_assert!(new >= old, "Kleene iteration must be monotone");
        }
        if next == current {
            return Ok(next);
        }
        let max_change = next
            .entries
            .iter()
            .zip(current.entries.iter())
            .map(|(a, b)| a - b)
            .max()
            .unwrap_or_else(Ratio::zero);
        current = next;
        if max_change <= *tolerance {
            // Geometric convergence: snap to small rationals and verify the
            // snapped table is an exact fixpoint at least as large as the
            // iterate.
            let mut snapped = DistanceTable::zero();
            for (idx, v) in current.entries.iter().enumerate() {
                snapped.entries[idx] = best_approx(v, SNAP_MAX_DENOMINATOR);
            }
            let ok_exact = apply_map(&snapped) == snapped;
            let ok_above = snapped
                .entries
                .iter()
                .zip(current.entries.iter())
                .all(|(s, c)| s >= c && (s - c) <= *tolerance);
            if ok_exact && ok_above {
                return Ok(snapped);
            }
            return Err(Error::NonConvergence(MAX_KLEENE_ROUNDS));
        }
    }
    Err(Error::NonConvergence(MAX_KLEENE_ROUNDS))
}

/// One-step bound `f_p + Δ(D_p(u), D_p(v))` used while replaying the
/// one-edit case analysis.
fn one_step_arm(table: &DistanceTable, u: State2, v: State2, p: PageId) -> Option<Ratio> {
    let cost = emd(table, &transition(u, p), &transition(v, p))?;
    Some(fault_diff(u, v, p) + cost)
}

/// Bound the worst suffix difference after the good side reaches
/// distribution `good` and the bad side `bad`, spending `base_cost` faults
/// on the edited request itself. Takes the tighter of the direct
/// mass-transfer route and (when the good side is a single state) the
/// refined route that looks one request ahead.
fn case_bound(
    table: &DistanceTable,
    base_cost: Ratio,
    good: &[(State2, Ratio)],
    bad: &[(State2, Ratio)],
) -> Option<Ratio> {
    let probes: [PageId; 4] = [PageId(0), PageId(1), PageId(2), PageId(3)];
    let direct = emd(table, good, bad);
    let refined = if good.len() == 1 {
        let g = good[0].0;
        let mut best: Option<Ratio> = None;
        for &p in &probes {
            let mut total = Ratio::zero();
            let mut defined = true;
            for (v, w) in bad {
                match one_step_arm(table, g, *v, p) {
                    Some(a) => total += w * a,
                    None => {
                        defined = false;
                        break;
                    }
                }
            }
            if defined && best.as_ref().is_none_or(|b| total > *b) {
                best = Some(total);
            }
        }
        best
    } else {
        None
    };
    let route = match (direct, refined) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    route.map(|r| base_cost + r)
}

/// Replay the one-edit case analysis (insertion, deletion, substitution of
/// every non-redundant request) mechanically over the distance table and
/// return the maximum expected-miss increase. Equals 17/6 for the table
/// computed by [`lru_random_distance_fixpoint`].
pub fn lru_random_edit_bound(table: &DistanceTable) -> Ratio {
    let s: State2 = [PageId(0), PageId(1)];
    let here = vec![(s, Ratio::one())];
    let miss_cost = |state: State2, p: PageId| rat(i64::from(!state.contains(&p)));
    let probes = [PageId(0), PageId(1), PageId(2), PageId(3)];

    let mut worst = Ratio::zero();
    let mut consider = |bound: Option<Ratio>| {
        if let Some(b) = bound {
            if b > worst {
                worst = b;
            }
        }
    };

    for &q in &probes {
        // Insertion: the bad sequence serves one extra request q.
        consider(case_bound(table, miss_cost(s, q), &here, &transition(s, q)));
        // Deletion: the good sequence serves one extra request q.
        consider(case_bound(
            table,
            -miss_cost(s, q),
            &transition(s, q),
            &here,
        ));
        // Substitutions q -> r.
        for &r in &probes {
            if q == r {
                continue;
            }
            consider(case_bound(
                table,
                miss_cost(s, r) - miss_cost(s, q),
                &transition(s, q),
                &transition(s, r),
            ));
        }
    }
    worst
}

/// Descriptive output of the smoothness conjecture probe: observed one-edit
/// worst increases for LRU-Random on small (k=2, exhaustive) or sampled
/// (k=3,4) spaces. No pass/fail semantics.
#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub k: usize,
    pub mode: &'static str,
    pub bases: usize,
    pub worst_increase: Ratio,
}

/// Probe the conjectured growth of the one-edit bound with k. Exhaustive at
/// k = 2, sampled above; `k <= 4` because the exact state space grows fast.
pub fn conjecture_probe(ks: &[usize], seed: u64) -> Result<Vec<ProbeRow>> {
    let mut rows = Vec::new();
    for &k in ks {
        if !(2..=4).contains(&k) {
            return Err(Error::InvalidParameter(
                "conjecture probe supports 2 <= k <= 4".into(),
            ));
        }
        let cfg = CacheConfig::new(k)?;
        let eval = EngineEvaluator {
            kind: EngineKind::LruRandom,
            cfg,
        };
        if k == 2 {
            let report = exhaustive_smoothness(&eval, cfg, 3, 6, 1, None)?;
            rows.push(ProbeRow {
                k,
                mode: "exhaustive",
                bases: report.bases_examined,
                worst_increase: report.worst_increase,
            });
            continue;
        }
        let alphabet_size = k + 2;
        let alphabet = alphabet_of_size(alphabet_size);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bases: Vec<RequestSequence> = (0..24)
            .map(|_| {
                let len = rng.gen_range(2 * k..=2 * k + 3);
                (0..len)
                    .map(|_| PageId(rng.gen_range(0..alphabet_size as u64)))
                    .collect()
            })
            .collect();
        let mut worst = Ratio::zero();
        for base in &bases {
            let base_misses = eval.misses(base)?;
            for neighbor in neighborhood(base, 1, &alphabet)? {
                let inc = eval.misses(&neighbor)? - &base_misses;
                if inc > worst {
                    worst = inc;
                }
            }
        }
        rows.push(ProbeRow {
            k,
            mode: "sampled",
            bases: bases.len(),
            worst_increase: worst,
        });
    }
    Ok(rows)
}
