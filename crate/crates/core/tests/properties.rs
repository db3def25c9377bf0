//! Property tests for the sequence vocabulary and the deterministic
//! simulators: metric laws, neighborhood completeness, phase-partition
//! lemmas, and the age characterization of LRU.

use std::collections::BTreeSet;

use proptest::prelude::*;

use pagesmooth::edit::{alphabet_of_size, edit_distance, neighborhood};
use pagesmooth::page::{request_ages, seq, CacheConfig, PageId, RequestSequence};
use pagesmooth::phase::phase_partition;
use pagesmooth::policies::{simulate, DetPolicyKind};

fn arb_seq(alphabet: u64, max_len: usize) -> impl Strategy<Value = RequestSequence> {
    prop::collection::vec(0..alphabet, 0..=max_len)
        .prop_map(|v| v.into_iter().map(PageId).collect())
}

proptest! {
    #[test]
    fn edit_distance_is_a_metric(
        a in arb_seq(4, 8),
        b in arb_seq(4, 8),
        c in arb_seq(4, 8),
    ) {
        prop_assert_eq!(edit_distance(&a, &b), edit_distance(&b, &a));
        prop_assert_eq!(edit_distance(&a, &a), 0);
        prop_assert!((edit_distance(&a, &b) == 0) == (a == b));
        prop_assert!(
            edit_distance(&a, &c) <= edit_distance(&a, &b) + edit_distance(&b, &c)
        );
    }

    #[test]
    fn phase_suffix_monotonicity(s in arb_seq(4, 14), cut in 0usize..14) {
        let k = 2;
        let full = phase_partition(&s, k);
        let cut = cut.min(s.len());
        let suffix = phase_partition(&s[cut..], k);
        prop_assert!(suffix.phase_count <= full.phase_count);
        if suffix.phase_count == full.phase_count {
            prop_assert!(suffix.last_phase_distinct <= full.last_phase_distinct);
        }
    }

    #[test]
    fn lru_faults_iff_age_at_least_k(s in arb_seq(5, 16), k in 1usize..4) {
        let cfg = CacheConfig::new(k).unwrap();
        let trace = simulate(&DetPolicyKind::Lru, cfg, &s).unwrap();
        for (idx, age) in request_ages(&s).into_iter().enumerate() {
            let expected_miss = age.is_none_or(|a| a >= k);
            prop_assert_eq!(trace.miss_flags[idx], expected_miss, "index {}", idx);
        }
    }

    #[test]
    fn fwf_misses_follow_the_phase_formula(s in arb_seq(4, 16), k in 1usize..4) {
        prop_assume!(!s.is_empty());
        let cfg = CacheConfig::new(k).unwrap();
        let trace = simulate(&DetPolicyKind::Fwf, cfg, &s).unwrap();
        let part = phase_partition(&s, k);
        prop_assert_eq!(
            trace.miss_count,
            k * (part.phase_count - 1) + part.last_phase_distinct
        );
    }

    #[test]
    fn policies_fault_once_per_page_when_everything_fits(
        s in arb_seq(3, 16),
        k in 3usize..5,
    ) {
        // At most k distinct pages: LRU, FIFO, FWF, and Belady all fault
        // exactly once per distinct page.
        let cfg = CacheConfig::new(k).unwrap();
        let distinct: BTreeSet<_> = s.iter().copied().collect();
        for kind in [
            DetPolicyKind::Lru,
            DetPolicyKind::Fifo,
            DetPolicyKind::Fwf,
            DetPolicyKind::Belady,
        ] {
            let trace = simulate(&kind, cfg, &s).unwrap();
            prop_assert_eq!(trace.miss_count, distinct.len(), "{}", kind.tag());
        }
    }

    #[test]
    fn det_step_lru_instances_stay_distinct(s in arb_seq(6, 20)) {
        // Two instances with different dummy-age sets keep different
        // cached-age sets along any common sequence, and both always cache
        // the k-i youngest ages.
        let cfg = CacheConfig::with_smoothing(3, 1).unwrap();
        let d1: BTreeSet<usize> = [2].into_iter().collect();
        let d2: BTreeSet<usize> = [3].into_iter().collect();
        for cut in 0..=s.len() {
            let a1 = pagesmooth::policies::det_step_lru_cached_ages(cfg, &d1, &s[..cut])
                .unwrap();
            let a2 = pagesmooth::policies::det_step_lru_cached_ages(cfg, &d2, &s[..cut])
                .unwrap();
            prop_assert_ne!(&a1, &a2, "prefix length {}", cut);
            for ages in [&a1, &a2] {
                prop_assert!(
                    (0..cfg.k - cfg.i).all(|young| ages.contains(&young)),
                    "youngest ages must always be cached: {:?}",
                    ages
                );
            }
        }
    }
}

#[test]
fn neighborhood_is_exactly_the_edit_ball() {
    // Exhaustive cross-check on a small instance: membership in the ball
    // iff edit distance <= delta.
    let alphabet = alphabet_of_size(2);
    let base = seq(&[0, 1, 0]);
    let ball = neighborhood(&base, 1, &alphabet).unwrap();
    let mut all: Vec<RequestSequence> = vec![Vec::new()];
    let mut frontier: Vec<RequestSequence> = vec![Vec::new()];
    for _ in 0..base.len() + 1 {
        let mut next = Vec::new();
        for s in &frontier {
            for p in 0..2u64 {
                let mut t = s.clone();
                t.push(PageId(p));
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    for candidate in all {
        let expected = edit_distance(&base, &candidate) <= 1;
        assert_eq!(ball.contains(&candidate), expected, "{candidate:?}");
    }
}

#[test]
fn single_edit_changes_phase_count_by_at_most_two() {
    // Exhaustive over k=2, alphabet 3, length <= 7: one edit adds at most
    // two phases, and hitting +2 cannot grow the last phase.
    let k = 2;
    let alphabet = alphabet_of_size(3);
    let mut frontier: Vec<RequestSequence> = vec![Vec::new()];
    let mut all: Vec<RequestSequence> = vec![Vec::new()];
    for _ in 0..7 {
        let mut next = Vec::new();
        for s in &frontier {
            for p in 0..3u64 {
                let mut t = s.clone();
                t.push(PageId(p));
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    for s in &all {
        let base = phase_partition(s, k);
        for neighbor in neighborhood(s, 1, &alphabet).unwrap() {
            let edited = phase_partition(&neighbor, k);
            assert!(
                edited.phase_count <= base.phase_count + 2,
                "{s:?} -> {neighbor:?}"
            );
            if edited.phase_count == base.phase_count + 2 {
                assert!(
                    edited.last_phase_distinct <= base.last_phase_distinct,
                    "{s:?} -> {neighbor:?}"
                );
            }
        }
    }
}

#[test]
fn miss_counts_are_invariant_under_page_renaming() {
    // The audit's canonicalization rests on this symmetry: applying a page
    // bijection changes no policy's or engine's miss count.
    use pagesmooth::audit::{EngineEvaluator, EngineKind, MissEvaluator, PolicyEvaluator};
    let cfg = CacheConfig::with_smoothing(2, 1).unwrap();
    let rename = |s: &[PageId]| -> RequestSequence {
        s.iter().map(|p| PageId((p.0 * 31 + 7) % 101)).collect()
    };
    let witnesses = [
        seq(&[0, 1, 2, 0, 1]),
        seq(&[2, 2, 0, 1, 0, 2]),
        seq(&[3, 1, 3, 0, 2, 1, 0]),
    ];
    let evaluators: Vec<Box<dyn MissEvaluator>> = vec![
        Box::new(PolicyEvaluator {
            kind: DetPolicyKind::Lru,
            cfg,
        }),
        Box::new(PolicyEvaluator {
            kind: DetPolicyKind::Fifo,
            cfg,
        }),
        Box::new(PolicyEvaluator {
            kind: DetPolicyKind::Fwf,
            cfg,
        }),
        Box::new(PolicyEvaluator {
            kind: DetPolicyKind::Belady,
            cfg,
        }),
        Box::new(EngineEvaluator {
            kind: EngineKind::Random { demand: false },
            cfg,
        }),
        Box::new(EngineEvaluator {
            kind: EngineKind::LruRandom,
            cfg,
        }),
        Box::new(EngineEvaluator {
            kind: EngineKind::Mark,
            cfg,
        }),
        Box::new(EngineEvaluator {
            kind: EngineKind::Eoa,
            cfg,
        }),
        Box::new(EngineEvaluator {
            kind: EngineKind::SmoothedLru,
            cfg,
        }),
    ];
    for s in &witnesses {
        let renamed = rename(s);
        for eval in &evaluators {
            assert_eq!(
                eval.misses(s).unwrap(),
                eval.misses(&renamed).unwrap(),
                "{} not renaming-symmetric on {s:?}",
                eval.tag()
            );
        }
    }
}

#[test]
fn fifo_pairs_stay_reversed_through_k5() {
    for k in 2..=5 {
        let built = pagesmooth::adversaries::build_fifo_construction(k).unwrap();
        let cfg = CacheConfig::new(k).unwrap();
        let good = simulate(&DetPolicyKind::Fifo, cfg, &built.pair.good).unwrap();
        let bad = simulate(&DetPolicyKind::Fifo, cfg, &built.pair.bad).unwrap();
        let reversed: Vec<PageId> = good.final_state.iter().rev().copied().collect();
        assert_eq!(reversed, bad.final_state, "k={k}");
    }
}

#[test]
fn composition_check_holds_for_lru_and_belady() {
    use pagesmooth::audit::{composition_check, PolicyEvaluator};
    use pagesmooth::rational::rat;
    let cfg = CacheConfig::new(2).unwrap();
    let lru = PolicyEvaluator {
        kind: DetPolicyKind::Lru,
        cfg,
    };
    assert!(composition_check(&lru, cfg, 3, 5, &rat(3), 2).unwrap());
    assert!(composition_check(&lru, cfg, 3, 5, &rat(3), 1).unwrap());
    let belady = PolicyEvaluator {
        kind: DetPolicyKind::Belady,
        cfg,
    };
    assert!(composition_check(&belady, cfg, 3, 5, &rat(2), 2).unwrap());
    // A beta1 below the measured delta=1 worst violates the precondition.
    assert!(composition_check(&lru, cfg, 3, 5, &rat(1), 2).is_err());
}

#[test]
fn lru_is_k_competitive_on_a_random_corpus() {
    use pagesmooth::audit::{check_competitive, PolicyEvaluator};
    use pagesmooth::rational::rat;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let k = 3;
    let cfg = CacheConfig::new(k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let corpus: Vec<RequestSequence> = (0..40)
        .map(|_| {
            let len = rng.gen_range(0..=18);
            (0..len).map(|_| PageId(rng.gen_range(0..6))).collect()
        })
        .collect();
    let lru = PolicyEvaluator {
        kind: DetPolicyKind::Lru,
        cfg,
    };
    let violations = check_competitive(&lru, cfg, &rat(k as i64), &rat(k as i64), &corpus).unwrap();
    assert!(violations.is_empty());
}

#[test]
fn opt_pair_distance_matches_delta() {
    let pair = pagesmooth::adversaries::gen_opt_pair(2, 3).unwrap();
    assert_eq!(pair.declared_distance, 3);
    assert_eq!(edit_distance(&pair.good, &pair.bad), 3);
}

#[test]
fn adaptive_lower_bound_misses_everywhere_for_lru_and_fifo() {
    for kind in [DetPolicyKind::Lru, DetPolicyKind::Fifo] {
        for k in 2..=4 {
            for delta in 1..=3 {
                let cfg = CacheConfig::new(k).unwrap();
                let pair = pagesmooth::adversaries::gen_det_demand_lower(kind.clone(), cfg, delta)
                    .unwrap();
                let trace = simulate(&kind, cfg, &pair.bad).unwrap();
                assert_eq!(trace.miss_count, pair.bad.len(), "{} k={k}", kind.tag());
                assert!(pair.declared_distance <= delta);
            }
        }
    }
}
