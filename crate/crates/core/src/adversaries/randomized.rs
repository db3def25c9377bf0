//! Adaptive lower bound against randomized demand-paging policies.
//!
//! The adversary tracks, through an exact engine, the probability of each of
//! k+1 pages not being cached. The bad sequence requests every page once,
//! then a page with not-cached probability at least 1/k, then runs k-1
//! subphases that each contribute at least 1/(k+1-j) expected faults by
//! requesting high-probability marked pages until an unmarked request pays.
//! Deleting the one page never requested after the opening block yields the
//! good sequence: k distinct pages, exactly k expected faults under any
//! demand-paging policy.

use std::collections::BTreeSet;

use num::Zero;
use serde_json::json;

use crate::adversaries::{Predicted, SequencePair};
use crate::engines::lru_random::LruRandomEngine;
use crate::engines::random::RandomEngine;
use crate::engines::DEFAULT_DISTRIBUTION_CAP;
use crate::error::Error;
use crate::page::{CacheConfig, PageId};
use crate::rational::{frac, harmonic, rat, Ratio};
use crate::Result;

const SUBPHASE_LOOP_CAP: usize = 100_000;

/// Exact engines with demand semantics that expose per-page not-in-cache
/// probabilities. Partition/Equitable expose no such distribution here,
/// which is why they are not accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemandEngineKind {
    Random,
    LruRandom,
}

impl DemandEngineKind {
    /// Report tag.
    pub fn tag(&self) -> &'static str {
        match self {
            DemandEngineKind::Random => "random-demand",
            DemandEngineKind::LruRandom => "lru-random-demand",
        }
    }
}

enum Engine {
    Random(RandomEngine),
    LruRandom(LruRandomEngine),
}

impl Engine {
    fn new(kind: DemandEngineKind, cfg: CacheConfig) -> Self {
        match kind {
            DemandEngineKind::Random => Engine::Random(RandomEngine::new(cfg, true)),
            DemandEngineKind::LruRandom => Engine::LruRandom(LruRandomEngine::with_options(
                cfg,
                true,
                DEFAULT_DISTRIBUTION_CAP,
            )),
        }
    }

    fn step(&mut self, p: PageId) -> Result<Ratio> {
        match self {
            Engine::Random(e) => e.step(p),
            Engine::LruRandom(e) => e.step(p),
        }
    }

    fn not_in_cache(&self, p: PageId) -> Ratio {
        match self {
            Engine::Random(e) => e.not_in_cache_prob(p),
            Engine::LruRandom(e) => e.not_in_cache_prob(p),
        }
    }
}

/// The generated pair plus the exact expectations realized by the engine.
#[derive(Debug, Clone)]
pub struct RandomizedLowerBound {
    pub pair: SequencePair,
    pub bad_expected: Ratio,
    pub good_expected: Ratio,
}

/// Run the adversary against an exact demand-paging engine.
pub fn gen_randomized_demand_lower(
    kind: DemandEngineKind,
    k: usize,
) -> Result<RandomizedLowerBound> {
    let cfg = CacheConfig::new(k)?;
    let pages: Vec<PageId> = (0..=k as u64).map(PageId).collect();
    let mut engine = Engine::new(kind, cfg);
    let mut bad = Vec::new();
    let mut bad_expected = Ratio::zero();
    let serve = |engine: &mut Engine, bad: &mut Vec<PageId>, p: PageId| -> Result<Ratio> {
        let fault = engine.step(p)?;
        bad.push(p);
        Ok(fault)
    };

    // Opening block: each of the k+1 pages once; k+1 compulsory faults.
    for &p in &pages {
        bad_expected += serve(&mut engine, &mut bad, p)?;
    }

    // Some page now has not-cached probability >= 1/k; request it.
    let argmax = |engine: &Engine, candidates: &[PageId]| -> PageId {
        candidates
            .iter()
            .copied()
            .max_by(|a, b| {
                engine
                    .not_in_cache(*a)
                    .cmp(&engine.not_in_cache(*b))
                    .then(b.cmp(a))
            })
            .expect("non-empty candidate set")
    };
    let m = argmax(&engine, &pages);
    if engine.not_in_cache(m) < frac(1, k as i64) {
        return Err(Error::ConstructionFailed(
            "no page had not-cached probability >= 1/k after the opening block".into(),
        ));
    }
    bad_expected += serve(&mut engine, &mut bad, m)?;
    let mut marked: BTreeSet<PageId> = [m].into_iter().collect();

    // k-1 subphases; the j-th contributes at least 1/(k+1-j) expected faults.
    for j in 1..k {
        let u = k + 1 - j;
        let threshold = frac(1, u as i64);
        let unmarked: Vec<PageId> = pages
            .iter()
            .copied()
            .filter(|p| !marked.contains(p))
            .collect();
        let marked_list: Vec<PageId> = marked.iter().copied().collect();
        let p_marked = |engine: &Engine| {
            marked_list
                .iter()
                .fold(Ratio::zero(), |acc, &p| acc + engine.not_in_cache(p))
        };

        let mut subphase = Ratio::zero();
        if !p_marked(&engine).is_zero() {
            let first = argmax(&engine, &marked_list);
            let epsilon = engine.not_in_cache(first);
            subphase += serve(&mut engine, &mut bad, first)?;
            let mut rounds = 0usize;
            while subphase < threshold && p_marked(&engine) > epsilon {
                rounds += 1;
                if rounds > SUBPHASE_LOOP_CAP {
                    return Err(Error::AdversaryCapReached(SUBPHASE_LOOP_CAP));
                }
                let next = argmax(&engine, &marked_list);
                subphase += serve(&mut engine, &mut bad, next)?;
            }
        }
        // Close the subphase with an unmarked request: an arbitrary one if
        // the expected faults already suffice, else the likeliest absentee.
        let closer = if subphase >= threshold {
            unmarked[0]
        } else {
            argmax(&engine, &unmarked)
        };
        subphase += serve(&mut engine, &mut bad, closer)?;
        marked.insert(closer);
        if subphase < threshold {
            return Err(Error::ConstructionFailed(format!(
                "subphase {j} contributed {subphase} < 1/{u} expected faults"
            )));
        }
        bad_expected += subphase;
    }

    // Exactly one page stays unmarked and was requested only in the opening
    // block; deleting that request gives the good sequence.
    let leftover: Vec<PageId> = pages
        .iter()
        .copied()
        .filter(|p| !marked.contains(p))
        .collect();
    if leftover.len() != 1 {
        return Err(Error::ConstructionFailed(format!(
            "expected one unmarked page, found {}",
            leftover.len()
        )));
    }
    let deleted = leftover[0];
    if bad.iter().filter(|&&p| p == deleted).count() != 1 {
        return Err(Error::ConstructionFailed(
            "the unmarked page was requested outside the opening block".into(),
        ));
    }
    let good: Vec<PageId> = bad.iter().copied().filter(|&p| p != deleted).collect();

    let floor = rat(k as i64) + harmonic(k) + frac(1, k as i64);
    if bad_expected < floor {
        return Err(Error::ConstructionFailed(format!(
            "bad sequence reached {bad_expected}, below the guaranteed k + H_k + 1/k = {floor}"
        )));
    }

    // A demand-paging policy faults exactly once per distinct page here.
    let mut check = Engine::new(kind, cfg);
    let mut good_expected = Ratio::zero();
    for &p in &good {
        good_expected += check.step(p)?;
    }
    if good_expected != rat(k as i64) {
        return Err(Error::ConstructionFailed(format!(
            "good sequence expected misses {good_expected}, want exactly {k}"
        )));
    }

    let pair = SequencePair::validated(
        format!("randomized-demand-lower-{}", kind.tag()),
        k,
        json!({ "engine": kind.tag() }),
        good,
        bad,
        1,
        Predicted {
            good_misses: Some(good_expected.clone()),
            bad_misses_lower_bound: Some(floor),
            ..Predicted::default()
        },
    )?;
    Ok(RandomizedLowerBound {
        pair,
        bad_expected,
        good_expected,
    })
}
