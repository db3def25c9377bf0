//! Empirical smoothness and competitiveness audits.
//!
//! The central operation enumerates every base sequence over a small
//! alphabet (canonicalized up to page renaming; every implemented policy is
//! symmetric under page bijections), expands its edit-distance neighborhood,
//! and tracks the worst additive and multiplicative miss increase with a
//! re-simulatable witness pair.

use std::collections::HashMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::corpus::{sequence_to_line, RatioRepr};
use crate::edit::{alphabet_of_size, neighborhood_with_cap, DEFAULT_NEIGHBORHOOD_CAP};
use crate::engines::enumerate::{enumerate_eoa, enumerate_mark};
use crate::engines::eoa::expected_eoa;
use crate::engines::lru_random::expected_lru_random;
use crate::engines::mark::expected_mark;
use crate::engines::random::expected_random;
use crate::engines::smoothed::{expected_smoothed_lru, expected_step_lru};
use crate::error::Error;
use crate::page::{CacheConfig, PageId, RequestSequence};
use crate::policies::{simulate, DetPolicyKind};
use crate::rational::{rat, Ratio};
use crate::Result;

/// Default cap on evaluated (base, neighbor) pairs per audit, sized so a
/// default run stays within about 10^7 simulated requests.
pub const DEFAULT_AUDIT_BUDGET: usize = 2_000_000;

/// Anything that maps a sequence to an exact miss count or expectation.
pub trait MissEvaluator {
    /// Report tag, e.g. `lru` or `lru-random`.
    fn tag(&self) -> String;
    /// Exact misses (deterministic) or expected misses (randomized).
    fn misses(&self, s: &[PageId]) -> Result<Ratio>;
}

/// Evaluator backed by a deterministic policy simulator.
pub struct PolicyEvaluator {
    pub kind: DetPolicyKind,
    pub cfg: CacheConfig,
}

impl MissEvaluator for PolicyEvaluator {
    fn tag(&self) -> String {
        self.kind.tag().to_string()
    }

    fn misses(&self, s: &[PageId]) -> Result<Ratio> {
        Ok(rat(simulate(&self.kind, self.cfg, s)?.miss_count as i64))
    }
}

/// Exact randomized engines usable in audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Random { demand: bool },
    LruRandom,
    Mark,
    MarkEnumerated,
    Eoa,
    EoaEnumerated,
    SmoothedLru,
    StepLru,
}

/// Evaluator backed by an exact expectation engine.
pub struct EngineEvaluator {
    pub kind: EngineKind,
    pub cfg: CacheConfig,
}

impl MissEvaluator for EngineEvaluator {
    fn tag(&self) -> String {
        match self.kind {
            EngineKind::Random { demand: false } => "random".into(),
            EngineKind::Random { demand: true } => "random-demand".into(),
            EngineKind::LruRandom => "lru-random".into(),
            EngineKind::Mark => "mark".into(),
            EngineKind::MarkEnumerated => "mark-enumerated".into(),
            EngineKind::Eoa => "eoa".into(),
            EngineKind::EoaEnumerated => "eoa-enumerated".into(),
            EngineKind::SmoothedLru => "smoothed-lru".into(),
            EngineKind::StepLru => "step-lru".into(),
        }
    }

    fn misses(&self, s: &[PageId]) -> Result<Ratio> {
        let e = match self.kind {
            EngineKind::Random { demand } => expected_random(self.cfg, s, demand)?,
            EngineKind::LruRandom => expected_lru_random(self.cfg, s)?,
            EngineKind::Mark => expected_mark(self.cfg, s)?,
            EngineKind::MarkEnumerated => enumerate_mark(self.cfg, s)?,
            EngineKind::Eoa => expected_eoa(self.cfg, s)?,
            EngineKind::EoaEnumerated => enumerate_eoa(self.cfg, s)?,
            EngineKind::SmoothedLru => expected_smoothed_lru(self.cfg, s)?,
            EngineKind::StepLru => expected_step_lru(self.cfg, s)?,
        };
        Ok(e.value)
    }
}

/// Build an evaluator from a CLI tag.
pub fn evaluator_from_tag(tag: &str, cfg: CacheConfig) -> Result<Box<dyn MissEvaluator>> {
    let policy = match tag {
        "lru" => Some(DetPolicyKind::Lru),
        "fifo" => Some(DetPolicyKind::Fifo),
        "fwf" => Some(DetPolicyKind::Fwf),
        "belady" | "opt" => Some(DetPolicyKind::Belady),
        _ => None,
    };
    if let Some(kind) = policy {
        return Ok(Box::new(PolicyEvaluator { kind, cfg }));
    }
    let engine = match tag {
        "random" => EngineKind::Random { demand: false },
        "random-demand" => EngineKind::Random { demand: true },
        "lru-random" => EngineKind::LruRandom,
        "mark" => EngineKind::Mark,
        "eoa" => EngineKind::Eoa,
        "smoothed-lru" => EngineKind::SmoothedLru,
        "step-lru" => EngineKind::StepLru,
        other => return Err(Error::UnknownPolicy(other.to_string())),
    };
    Ok(Box::new(EngineEvaluator { kind: engine, cfg }))
}

/// A declared smoothness bound `A(σ') <= alpha·A(σ) + beta`, evaluated at a
/// concrete delta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSpec {
    pub alpha: Ratio,
    pub beta: Ratio,
    pub kind: BoundKind,
    /// Human-readable formula, e.g. `(1, delta*(k+1))`.
    pub formula: String,
}

/// Whether the bound is claimed as an upper bound or exhibited as a lower
/// bound witness family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

/// Audit verdict against a declared bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Tight,
    Violated,
}

/// A witness pair with its evaluated miss counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub base: RequestSequence,
    pub neighbor: RequestSequence,
    pub base_misses: Ratio,
    pub neighbor_misses: Ratio,
}

/// Result of an exhaustive smoothness audit.
#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub policy: String,
    pub k: usize,
    pub alphabet_size: usize,
    pub max_len: usize,
    pub delta: usize,
    pub bases_examined: usize,
    pub pairs_examined: usize,
    /// max over pairs of A(σ') - A(σ).
    pub worst_increase: Ratio,
    pub increase_witness: Option<Witness>,
    /// max over pairs of A(σ') / max(A(σ), 1).
    pub worst_ratio: Ratio,
    pub ratio_witness: Option<Witness>,
    pub bound: Option<BoundSpec>,
    /// max over pairs of A(σ') - alpha·A(σ) - beta, when a bound is declared.
    pub worst_margin: Option<Ratio>,
    pub verdict: Option<Verdict>,
}

impl SmoothnessReport {
    /// JSON rendering with exact fractions alongside decimals.
    pub fn to_json(&self) -> serde_json::Value {
        let witness = |w: &Option<Witness>| match w {
            None => serde_json::Value::Null,
            Some(w) => serde_json::json!({
                "base": sequence_to_line(&w.base),
                "neighbor": sequence_to_line(&w.neighbor),
                "base_misses": RatioRepr::of(&w.base_misses),
                "neighbor_misses": RatioRepr::of(&w.neighbor_misses),
            }),
        };
        serde_json::json!({
            "policy": self.policy,
            "k": self.k,
            "alphabet_size": self.alphabet_size,
            "max_len": self.max_len,
            "delta": self.delta,
            "bases_examined": self.bases_examined,
            "pairs_examined": self.pairs_examined,
            "worst_increase": RatioRepr::of(&self.worst_increase),
            "increase_witness": witness(&self.increase_witness),
            "worst_ratio": RatioRepr::of(&self.worst_ratio),
            "ratio_witness": witness(&self.ratio_witness),
            "bound": self.bound.as_ref().map(|b| serde_json::json!({
                "alpha": RatioRepr::of(&b.alpha),
                "beta": RatioRepr::of(&b.beta),
                "kind": b.kind,
                "formula": b.formula,
            })),
            "worst_margin": self.worst_margin.as_ref().map(RatioRepr::of),
            "verdict": self.verdict,
        })
    }

    /// Aligned plain-text rendering including the witness pair inline.
    pub fn render_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "smoothness audit: policy={} k={} alphabet={} max_len={} delta={}",
            self.policy, self.k, self.alphabet_size, self.max_len, self.delta
        );
        let _ = writeln!(
            out,
            "  searched {} bases, {} pairs",
            self.bases_examined, self.pairs_examined
        );
        let _ = writeln!(
            out,
            "  worst additive increase : {}",
            crate::rational::to_fraction_string(&self.worst_increase)
        );
        if let Some(w) = &self.increase_witness {
            let _ = writeln!(
                out,
                "    witness: [{}] ({}) -> [{}] ({})",
                sequence_to_line(&w.base),
                crate::rational::to_fraction_string(&w.base_misses),
                sequence_to_line(&w.neighbor),
                crate::rational::to_fraction_string(&w.neighbor_misses)
            );
        }
        let _ = writeln!(
            out,
            "  worst ratio             : {}",
            crate::rational::to_fraction_string(&self.worst_ratio)
        );
        if let (Some(bound), Some(verdict)) = (&self.bound, self.verdict) {
            let _ = writeln!(
                out,
                "  bound {} alpha={} beta={} -> {:?}",
                bound.formula,
                crate::rational::to_fraction_string(&bound.alpha),
                crate::rational::to_fraction_string(&bound.beta),
                verdict
            );
        }
        out
    }
}

/// All sequences over `{0..alphabet_size-1}` of length `<= max_len` in
/// first-occurrence canonical form (page n may appear only after 0..n-1).
pub fn canonical_sequences(alphabet_size: usize, max_len: usize) -> Vec<RequestSequence> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<RequestSequence> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            let used = s.iter().map(|p| p.0 + 1).max().unwrap_or(0) as usize;
            let limit = (used + 1).min(alphabet_size);
            for p in 0..limit {
                let mut t = s.clone();
                t.push(PageId(p as u64));
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Exhaustively audit `A(σ') - A(σ)` over all base sequences of length
/// `<= max_len` (canonical over the alphabet) and all neighbors at edit
/// distance `<= delta`.
pub fn exhaustive_smoothness(
    evaluator: &dyn MissEvaluator,
    cfg: CacheConfig,
    alphabet_size: usize,
    max_len: usize,
    delta: usize,
    bound: Option<BoundSpec>,
) -> Result<SmoothnessReport> {
    exhaustive_smoothness_with_budget(
        evaluator,
        cfg,
        alphabet_size,
        max_len,
        delta,
        bound,
        DEFAULT_AUDIT_BUDGET,
    )
}

/// [`exhaustive_smoothness`] with an explicit pair budget.
#[allow(clippy::too_many_arguments)]
pub fn exhaustive_smoothness_with_budget(
    evaluator: &dyn MissEvaluator,
    cfg: CacheConfig,
    alphabet_size: usize,
    max_len: usize,
    delta: usize,
    bound: Option<BoundSpec>,
    budget: usize,
) -> Result<SmoothnessReport> {
    let alphabet = alphabet_of_size(alphabet_size);
    let bases = canonical_sequences(alphabet_size, max_len);
    let mut cache: HashMap<RequestSequence, Ratio> = HashMap::new();
    let eval = |s: &RequestSequence, cache: &mut HashMap<RequestSequence, Ratio>| {
        if let Some(v) = cache.get(s) {
            return Ok::<Ratio, Error>(v.clone());
        }
        let v = evaluator.misses(s)?;
        cache.insert(s.clone(), v.clone());
        Ok(v)
    };

    let mut worst_increase = Ratio::zero();
    let mut increase_witness = None;
    let mut worst_ratio = Ratio::zero();
    let mut ratio_witness = None;
    let mut worst_margin: Option<Ratio> = None;
    let mut pairs = 0usize;

    for base in &bases {
        let base_misses = eval(base, &mut cache)?;
        let nbhd = neighborhood_with_cap(base, delta, &alphabet, DEFAULT_NEIGHBORHOOD_CAP)?;
        for neighbor in &nbhd {
            pairs += 1;
            if pairs > budget {
                return Err(Error::AuditSpaceOverflow { cap: budget });
            }
            let neighbor_misses = eval(neighbor, &mut cache)?;
            // The base sits in its own neighborhood, so the maximum over
            // pairs is always >= 0 and the 0 start value is attained.
            let increase = &neighbor_misses - &base_misses;
            if increase > worst_increase
                || (increase_witness.is_none() && increase == worst_increase)
            {
                worst_increase = increase.clone();
                increase_witness = Some(Witness {
                    base: base.clone(),
                    neighbor: neighbor.clone(),
                    base_misses: base_misses.clone(),
                    neighbor_misses: neighbor_misses.clone(),
                });
            }
            let denom = if base_misses < Ratio::one() {
                Ratio::one()
            } else {
                base_misses.clone()
            };
            let ratio = &neighbor_misses / denom;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                ratio_witness = Some(Witness {
                    base: base.clone(),
                    neighbor: neighbor.clone(),
                    base_misses: base_misses.clone(),
                    neighbor_misses: neighbor_misses.clone(),
                });
            }
            if let Some(b) = &bound {
                let margin = &neighbor_misses - &b.alpha * &base_misses - &b.beta;
                match &mut worst_margin {
                    None => worst_margin = Some(margin),
                    Some(m) if margin > *m => *m = margin,
                    _ => {}
                }
            }
        }
    }

    let verdict = match (&bound, &worst_margin) {
        (Some(_), Some(m)) => Some(if m.is_positive() {
            Verdict::Violated
        } else if m.is_zero() {
            Verdict::Tight
        } else {
            Verdict::Holds
        }),
        _ => None,
    };

    Ok(SmoothnessReport {
        policy: evaluator.tag(),
        k: cfg.k,
        alphabet_size,
        max_len,
        delta,
        bases_examined: bases.len(),
        pairs_examined: pairs,
        worst_increase,
        increase_witness,
        worst_ratio,
        ratio_witness,
        bound,
        worst_margin,
        verdict,
    })
}

/// A sequence violating `A(σ) <= c·OPT(σ) + beta`.
#[derive(Debug, Clone)]
pub struct CompetitiveViolation {
    pub sequence: RequestSequence,
    pub policy_misses: Ratio,
    pub opt_misses: usize,
}

/// Check `A(σ) <= c·OPT(σ) + beta` over a corpus, with OPT the Belady miss
/// count. Returns the (possibly empty) list of violations.
pub fn check_competitive(
    evaluator: &dyn MissEvaluator,
    cfg: CacheConfig,
    c: &Ratio,
    beta: &Ratio,
    corpus: &[RequestSequence],
) -> Result<Vec<CompetitiveViolation>> {
    let mut violations = Vec::new();
    for s in corpus {
        let policy_misses = evaluator.misses(s)?;
        let opt = simulate(&DetPolicyKind::Belady, cfg, s)?.miss_count;
        if policy_misses > c * rat(opt as i64) + beta {
            violations.push(CompetitiveViolation {
                sequence: s.clone(),
                policy_misses,
                opt_misses: opt,
            });
        }
    }
    Ok(violations)
}

/// Verify the one-edit-to-delta composition: assuming the worst one-edit
/// increase is at most `beta1`, the worst delta-edit increase over the same
/// space must be at most `delta * beta1`.
pub fn composition_check(
    evaluator: &dyn MissEvaluator,
    cfg: CacheConfig,
    alphabet_size: usize,
    max_len: usize,
    beta1: &Ratio,
    delta: usize,
) -> Result<bool> {
    let at_one = exhaustive_smoothness(evaluator, cfg, alphabet_size, max_len, 1, None)?;
    if at_one.worst_increase > *beta1 {
        return Err(Error::InvalidParameter(format!(
            "delta=1 worst increase {} already exceeds beta1 {}",
            at_one.worst_increase, beta1
        )));
    }
    let at_delta = exhaustive_smoothness(evaluator, cfg, alphabet_size, max_len, delta, None)?;
    Ok(at_delta.worst_increase <= rat(delta as i64) * beta1)
}
