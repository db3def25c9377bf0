//! Generators for the worst-case sequence pairs behind each smoothness
//! bound. Every generator validates its own output: the declared edit
//! distance is recomputed, and constructions with nontrivial bookkeeping
//! re-simulate themselves and fail hard on mismatch.

mod fifo;
mod mark;
mod partition;
mod randomized;

pub use fifo::{
    build_fifo_construction, extension_from, fifo_extension_misses, gen_fifo_extension,
    gen_fifo_pair, ExtensionMisses, FifoConstruction,
};
pub use mark::gen_mark_pair;
pub use partition::{gen_partition_equitable_pair, PartitionEquitablePair};
pub use randomized::{gen_randomized_demand_lower, DemandEngineKind, RandomizedLowerBound};

use num::One;

use crate::corpus::{PairRecord, PredictedRepr, RatioRepr};
use crate::edit::edit_distance;
use crate::error::Error;
use crate::page::{CacheConfig, PageId, RequestSequence};
use crate::policies::{evicted_on_last, simulate, DetPolicyKind};
use crate::rational::{frac, pow, rat, Ratio};
use crate::Result;

/// Paper-predicted miss statistics for a generated pair, exact where the
/// construction admits a closed form.
#[derive(Debug, Clone, Default)]
pub struct Predicted {
    pub good_misses: Option<Ratio>,
    pub bad_misses: Option<Ratio>,
    pub bad_misses_lower_bound: Option<Ratio>,
    /// Exact difference bad - good when a closed form exists.
    pub difference: Option<Ratio>,
    /// Limit of the difference for asymptotic families.
    pub difference_limit: Option<Ratio>,
}

/// A (good, bad) sequence pair with its verified edit distance.
#[derive(Debug, Clone)]
pub struct SequencePair {
    pub name: String,
    pub k: usize,
    pub params: serde_json::Value,
    pub good: RequestSequence,
    pub bad: RequestSequence,
    pub declared_distance: usize,
    pub predicted: Predicted,
}

impl SequencePair {
    /// Construct and verify `edit_distance(good, bad) == declared_distance`.
    pub fn validated(
        name: impl Into<String>,
        k: usize,
        params: serde_json::Value,
        good: RequestSequence,
        bad: RequestSequence,
        declared_distance: usize,
        predicted: Predicted,
    ) -> Result<Self> {
        let actual = edit_distance(&good, &bad);
        if actual != declared_distance {
            return Err(Error::ConstructionFailed(format!(
                "declared distance {declared_distance} but edit distance is {actual}"
            )));
        }
        Ok(SequencePair {
            name: name.into(),
            k,
            params,
            good,
            bad,
            declared_distance,
            predicted,
        })
    }

    /// Corpus record with fraction/decimal renderings.
    pub fn to_record(&self) -> PairRecord {
        let repr = |r: &Option<Ratio>| r.as_ref().map(RatioRepr::of);
        PairRecord {
            name: self.name.clone(),
            k: self.k,
            params: self.params.clone(),
            good: crate::corpus::sequence_to_line(&self.good),
            bad: crate::corpus::sequence_to_line(&self.bad),
            declared_distance: self.declared_distance,
            predicted: PredictedRepr {
                good_misses: repr(&self.predicted.good_misses),
                bad_misses: repr(&self.predicted.bad_misses),
                bad_misses_lower_bound: repr(&self.predicted.bad_misses_lower_bound),
                difference: repr(&self.predicted.difference),
                difference_limit: repr(&self.predicted.difference_limit),
            },
        }
    }
}

fn pages(range: std::ops::Range<u64>) -> impl Iterator<Item = PageId> {
    range.map(PageId)
}

/// Adaptive lower bound against a deterministic demand-paging online policy:
/// the bad sequence requests k+1 distinct pages and then always the page the
/// policy just evicted, so it faults on every request; the good sequence
/// removes every request to the least frequent page.
pub fn gen_det_demand_lower(
    kind: DetPolicyKind,
    cfg: CacheConfig,
    delta: usize,
) -> Result<SequencePair> {
    if !kind.is_adaptive_target() {
        return Err(Error::NotDemandPaging(kind.tag().to_string()));
    }
    if delta == 0 {
        return Err(Error::InvalidParameter("delta must be >= 1".into()));
    }
    let k = cfg.k;
    let target_len = k + delta * (k + 1);
    let mut bad: RequestSequence = pages(0..k as u64 + 1).collect();
    while bad.len() < target_len {
        let trace = simulate(&kind, cfg, &bad)?;
        let evicted = evicted_on_last(&trace).and_then(|v| v.first().copied());
        match evicted {
            Some(p) => bad.push(p),
            None => {
                return Err(Error::ConstructionFailed(
                    "adaptive adversary saw a request that evicted nothing".into(),
                ))
            }
        }
    }
    bad.truncate(target_len);

    let trace = simulate(&kind, cfg, &bad)?;
    if trace.miss_count != bad.len() {
        return Err(Error::ConstructionFailed(format!(
            "bad sequence should fault on every request; got {}/{}",
            trace.miss_count,
            bad.len()
        )));
    }

    // Least frequent page, ties toward the smallest id.
    let mut counts: std::collections::BTreeMap<PageId, usize> = std::collections::BTreeMap::new();
    for &p in &bad {
        *counts.entry(p).or_insert(0) += 1;
    }
    let (&victim, &occurrences) = counts.iter().min_by_key(|&(p, c)| (*c, *p)).unwrap();
    if occurrences > delta {
        return Err(Error::ConstructionFailed(format!(
            "least frequent page occurs {occurrences} times, more than delta"
        )));
    }
    let good: RequestSequence = bad.iter().copied().filter(|&p| p != victim).collect();

    let mut predicted = Predicted {
        bad_misses: Some(rat(bad.len() as i64)),
        good_misses: Some(rat(k as i64)),
        ..Predicted::default()
    };
    predicted.difference = Some(rat((bad.len() - k) as i64));
    SequencePair::validated(
        format!("det-demand-lower-{}", kind.tag()),
        k,
        serde_json::json!({ "policy": kind.tag(), "delta": delta }),
        good,
        bad,
        occurrences,
        predicted,
    )
}

/// The OPT pair: the good sequence cycles k pages, the bad inserts delta
/// requests to a fresh page, each of which costs OPT two extra misses.
pub fn gen_opt_pair(k: usize, delta: usize) -> Result<SequencePair> {
    let base: RequestSequence = pages(0..k as u64).chain(pages(0..k as u64)).collect();
    let fresh = PageId(k as u64);
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for _ in 0..delta {
        good.extend(base.iter().copied());
        bad.extend(base.iter().copied());
        bad.push(fresh);
    }
    good.extend(base.iter().copied());
    bad.extend(base.iter().copied());
    SequencePair::validated(
        "opt",
        k,
        serde_json::json!({ "delta": delta }),
        good,
        bad,
        delta,
        Predicted {
            good_misses: Some(rat(k as i64)),
            bad_misses_lower_bound: Some(rat((k + 2 * delta) as i64)),
            difference: Some(rat(2 * delta as i64)),
            ..Predicted::default()
        },
    )
}

/// The FWF pair: cycling k pages costs k misses total; inserting a fresh
/// page before every other lap costs 2k extra misses per insertion.
pub fn gen_fwf_pair(k: usize, delta: usize) -> Result<SequencePair> {
    let lap: RequestSequence = pages(0..k as u64).collect();
    let fresh = PageId(k as u64);
    let mut good = Vec::new();
    for _ in 0..2 * delta + 1 {
        good.extend(lap.iter().copied());
    }
    let mut bad: RequestSequence = lap.clone();
    for _ in 0..delta {
        bad.push(fresh);
        bad.extend(lap.iter().copied());
        bad.extend(lap.iter().copied());
    }
    SequencePair::validated(
        "fwf",
        k,
        serde_json::json!({ "delta": delta }),
        good,
        bad,
        delta,
        Predicted {
            good_misses: Some(rat(k as i64)),
            bad_misses: Some(rat((k + 2 * delta * k) as i64)),
            difference: Some(rat((2 * delta * k) as i64)),
            ..Predicted::default()
        },
    )
}

/// The Random pair: delta fresh-page insertions between long k-page cycling
/// blocks; each insertion costs k+1 expected misses in the limit.
pub fn gen_random_pair(k: usize, delta: usize, n: usize) -> Result<SequencePair> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut block = Vec::with_capacity(k * n);
    for _ in 0..n {
        block.extend(pages(0..k as u64));
    }
    let mut good = block.clone();
    let mut bad = block.clone();
    for rep in 0..delta {
        good.extend(block.iter().copied());
        bad.push(PageId((k + rep) as u64));
        bad.extend(block.iter().copied());
    }
    SequencePair::validated(
        "random",
        k,
        serde_json::json!({ "delta": delta, "n": n }),
        good,
        bad,
        delta,
        Predicted {
            difference_limit: Some(rat((delta * (k + 1)) as i64)),
            ..Predicted::default()
        },
    )
}

/// The EOA pair: a palindrome block of m distinct pages, with a fresh page
/// inserted at the turning point of each repetition (fresh per repetition,
/// so each insertion misses with probability one). The expected difference
/// has the exact closed form `delta * (1 + (k/(2k-1)) * (1 - (1-1/k)^{2m}))`.
pub fn gen_eoa_pair(k: usize, m: usize, delta: usize) -> Result<SequencePair> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let forward: RequestSequence = pages(0..m as u64).collect();
    let backward: RequestSequence = forward.iter().rev().copied().collect();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for rep in 0..delta {
        good.extend(forward.iter().copied());
        good.extend(backward.iter().copied());
        bad.extend(forward.iter().copied());
        bad.push(PageId((m + rep) as u64));
        bad.extend(backward.iter().copied());
    }
    let survive = Ratio::one() - frac(1, k as i64);
    let difference = rat(delta as i64)
        * (Ratio::one() + frac(k as i64, 2 * k as i64 - 1) * (Ratio::one() - pow(&survive, 2 * m)));
    let limit = rat(delta as i64) * (Ratio::one() + frac(k as i64, 2 * k as i64 - 1));
    SequencePair::validated(
        "eoa",
        k,
        serde_json::json!({ "m": m, "delta": delta }),
        good,
        bad,
        delta,
        Predicted {
            difference: Some(difference),
            difference_limit: Some(limit),
            ..Predicted::default()
        },
    )
}

/// The Smoothed-LRU pair: two laps over k+i pages and a trailing fresh
/// request; the bad copy inserts a fresh page between the laps, pushing
/// every second-lap age from k+i-1 to k+i. Exact difference per copy:
/// `(k+i)/(2i+1) + 1`.
pub fn gen_smoothed_lru_pair(k: usize, i: usize, delta: usize) -> Result<SequencePair> {
    let cfg = CacheConfig::with_smoothing(k, i)?;
    let span = (k + i) as u64;
    let lap: RequestSequence = pages(0..span).collect();
    let inserted = PageId(span);
    let trailer = PageId(span + 1);
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for _ in 0..delta {
        good.extend(lap.iter().copied());
        good.extend(lap.iter().copied());
        good.push(trailer);
        bad.extend(lap.iter().copied());
        bad.push(inserted);
        bad.extend(lap.iter().copied());
        bad.push(trailer);
    }
    let difference = rat(delta as i64) * (frac((k + i) as i64, (2 * i + 1) as i64) + Ratio::one());
    SequencePair::validated(
        "smoothed-lru",
        cfg.k,
        serde_json::json!({ "i": i, "delta": delta }),
        good,
        bad,
        delta,
        Predicted {
            difference: Some(difference),
            ..Predicted::default()
        },
    )
}
