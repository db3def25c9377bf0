//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the checked values (run with `--nocapture` to see them).

use std::collections::BTreeSet;
use std::time::Instant;

use num::{One, Zero};

use pagesmooth::adversaries::{
    build_fifo_construction, fifo_extension_misses, gen_eoa_pair, gen_mark_pair,
    gen_partition_equitable_pair, gen_random_pair, gen_randomized_demand_lower,
    gen_smoothed_lru_pair, DemandEngineKind,
};
use pagesmooth::audit::{
    check_competitive, exhaustive_smoothness, EngineEvaluator, EngineKind, PolicyEvaluator,
};
use pagesmooth::edit::edit_distance;
use pagesmooth::engines::enumerate::enumerate_mark;
use pagesmooth::engines::eoa::expected_eoa;
use pagesmooth::engines::mark::{expected_mark, mark_bad_phase_cost, mark_good_phase_cost};
use pagesmooth::engines::monte_carlo::{monte_carlo, z_score};
use pagesmooth::engines::random::expected_random;
use pagesmooth::engines::smoothed::{
    expected_smoothed_lru, smoothed_lru_ensemble, smoothed_lru_hit_prob,
};
use pagesmooth::engines::RandomizedPolicy;
use pagesmooth::fixpoint::{
    default_tolerance, lru_random_distance_fixpoint, lru_random_edit_bound, PairShape,
};
use pagesmooth::layers::layers_equal_up_to_renaming;
use pagesmooth::page::{seq, CacheConfig, PageId, RequestSequence};
use pagesmooth::phase::phase_partition;
use pagesmooth::policies::{brute_force_opt, simulate, DetPolicyKind};
use pagesmooth::rational::{frac, harmonic, pow, rat, Ratio};

fn cfg(k: usize) -> CacheConfig {
    CacheConfig::new(k).unwrap()
}

/// Every sequence of length <= max_len over pages base..base+alphabet.
fn all_sequences(alphabet: u64, base: u64, max_len: usize) -> Vec<RequestSequence> {
    let mut out: Vec<RequestSequence> = vec![Vec::new()];
    let mut frontier: Vec<RequestSequence> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for p in 0..alphabet {
                let mut t = s.clone();
                t.push(PageId(base + p));
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn criterion_01_belady_matches_brute_force_everywhere() {
    let start = Instant::now();
    let space = all_sequences(3, 1, 8);
    let mut checked = 0usize;
    for s in &space {
        let belady = simulate(&DetPolicyKind::Belady, cfg(2), s)
            .unwrap()
            .miss_count;
        let oracle = brute_force_opt(cfg(2), s).unwrap();
        assert_eq!(
            belady, oracle,
            "belady {belady} != brute force {oracle} on {s:?}"
        );
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert_eq!(checked, 9841);
    assert!(
        elapsed.as_secs() < 120,
        "criterion 1 must finish within 2 minutes, took {elapsed:?}"
    );
    println!(
        "criterion 01 PASS: belady == brute-force OPT on {checked} sequences \
         (k=2, alphabet 3, len <= 8) in {elapsed:?}"
    );
}

#[test]
fn criterion_02_exhaustive_delta1_smoothness_of_lru_opt_fwf() {
    let start = Instant::now();
    let lru = exhaustive_smoothness(
        &PolicyEvaluator {
            kind: DetPolicyKind::Lru,
            cfg: cfg(2),
        },
        cfg(2),
        3,
        6,
        1,
        None,
    )
    .unwrap();
    assert_eq!(
        lru.worst_increase,
        rat(3),
        "LRU worst increase must be k+1 = 3"
    );

    let opt = exhaustive_smoothness(
        &PolicyEvaluator {
            kind: DetPolicyKind::Belady,
            cfg: cfg(2),
        },
        cfg(2),
        3,
        6,
        1,
        None,
    )
    .unwrap();
    assert_eq!(opt.worst_increase, rat(2), "OPT worst increase must be 2");

    let fwf = exhaustive_smoothness(
        &PolicyEvaluator {
            kind: DetPolicyKind::Fwf,
            cfg: cfg(2),
        },
        cfg(2),
        3,
        7,
        1,
        None,
    )
    .unwrap();
    assert_eq!(
        fwf.worst_increase,
        rat(4),
        "FWF worst increase must be 2k = 4"
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "criterion 2 must finish within 5 minutes, took {elapsed:?}"
    );
    println!(
        "criterion 02 PASS: delta=1 worst increases LRU=3, OPT=2, FWF=4 \
         (k=2, alphabet 3) in {elapsed:?}"
    );
}

#[test]
fn criterion_03_fifo_construction_and_extension_ratio() {
    for k in [2usize, 3, 4] {
        let built = build_fifo_construction(k).unwrap();
        assert_eq!(
            edit_distance(&built.pair.good, &built.pair.bad),
            1,
            "fifo pair distance must be 1 at k={k}"
        );
        // Final configurations are exact mutual reverses, which is
        // "reversed up to renaming" with the identity renaming.
        let reversed: Vec<PageId> = built.good_final.iter().rev().copied().collect();
        assert_eq!(
            reversed, built.bad_final,
            "configs must be reversed at k={k}"
        );

        let rounds = 200;
        let ext = fifo_extension_misses(k, rounds).unwrap();
        let ratio = ext.bad_extension_misses as f64 / ext.good_extension_misses as f64;
        assert!(
            ratio >= k as f64 - 0.1,
            "extension miss ratio {ratio} below k - 0.1 at k={k}"
        );
        println!(
            "criterion 03 PASS (k={k}): distance 1, reversed finals, \
             200-round extension miss ratio {ratio:.3} >= {}",
            k as f64 - 0.1
        );
    }
}

#[test]
fn criterion_04_mark_closed_forms_and_exchangeability() {
    // Closed forms on the shifted-phase family.
    let (k, l, phases) = (8usize, 3usize, 10usize);
    let pair = gen_mark_pair(k, l, phases).unwrap();
    let phase_costs = |s: &[PageId]| -> Vec<Ratio> {
        let e = expected_mark(cfg(k), s).unwrap();
        let part = phase_partition(s, k);
        (0..part.phase_count)
            .map(|idx| {
                e.per_request[part.phase_range(idx, s.len())]
                    .iter()
                    .fold(Ratio::zero(), |a, b| a + b)
            })
            .collect()
    };
    let bad_costs = phase_costs(&pair.bad);
    let bad_expect = mark_bad_phase_cost(k, l);
    assert_eq!(
        bad_expect,
        rat(l as i64) * (Ratio::one() + harmonic(k) - harmonic(l))
    );
    #[allow(clippy::needless_range_loop)] // h is the phase number
    for h in 2..2 + phases {
        assert_eq!(bad_costs[h], bad_expect, "bad phase {h}");
    }
    let good_costs = phase_costs(&pair.good);
    let good_expect = mark_good_phase_cost(k, l);
    assert_eq!(
        good_expect,
        rat(l as i64 - 1) + harmonic(k) - harmonic(l - 1)
    );
    #[allow(clippy::needless_range_loop)] // h is the phase number
    for h in 2..1 + phases {
        assert_eq!(good_costs[h], good_expect, "good phase {h}");
    }

    // Exchangeability shortcut == full distribution enumeration.
    let mut checked = 0usize;
    for s in all_sequences(3, 0, 7) {
        let by_formula = expected_mark(cfg(2), &s).unwrap();
        let by_enumeration = enumerate_mark(cfg(2), &s).unwrap();
        assert_eq!(by_formula.value, by_enumeration.value, "mismatch on {s:?}");
        checked += 1;
    }
    println!(
        "criterion 04 PASS: per-phase Mark costs of the (k=8, l=3) family match \
         l(1+H_k-H_l) and l-1+H_k-H_(l-1) exactly; formula == enumeration on \
         {checked} sequences (k=2, alphabet 3, len <= 7)"
    );
}

#[test]
fn criterion_05_random_engine_monte_carlo_pair_and_audit() {
    // Exact value on the four-request example.
    let abca = seq(&[10, 11, 12, 10]);
    let exact = expected_random(cfg(2), &abca, false).unwrap();
    assert_eq!(exact.value, frac(15, 4));

    // Monte Carlo agreement within three standard errors.
    let est = monte_carlo(RandomizedPolicy::Random, cfg(2), &abca, 100_000, 20260810).unwrap();
    let z = z_score(&est, &exact.value);
    assert!(
        z.abs() <= 3.0,
        "z-score {z} out of range (mean {})",
        est.mean
    );

    // Asymptotic pair difference at finite n.
    let pair = gen_random_pair(3, 1, 50).unwrap();
    let good = expected_random(cfg(3), &pair.good, false).unwrap();
    let bad = expected_random(cfg(3), &pair.bad, false).unwrap();
    let diff = &bad.value - &good.value;
    assert!(diff >= frac(39, 10), "difference {diff} below 3.9");

    // Exhaustive delta=1 audit of the exact engine never exceeds k+1 = 3.
    let report = exhaustive_smoothness(
        &EngineEvaluator {
            kind: EngineKind::Random { demand: false },
            cfg: cfg(2),
        },
        cfg(2),
        3,
        6,
        1,
        None,
    )
    .unwrap();
    assert!(
        report.worst_increase <= rat(3),
        "audit worst {}",
        report.worst_increase
    );

    println!(
        "criterion 05 PASS: Random = 15/4 exactly; Monte Carlo z = {z:.2}; \
         pair difference {} >= 3.9; audited worst increase {} <= 3",
        pagesmooth::rational::to_decimal_string(&diff, 4),
        pagesmooth::rational::to_fraction_string(&report.worst_increase),
    );
}

#[test]
fn criterion_06_eoa_closed_form() {
    let (k, m, delta) = (4usize, 20usize, 2usize);
    let pair = gen_eoa_pair(k, m, delta).unwrap();
    let good = expected_eoa(cfg(k), &pair.good).unwrap();
    let bad = expected_eoa(cfg(k), &pair.bad).unwrap();
    let diff = &bad.value - &good.value;
    // 2 * (1 + (4/7) * (1 - (3/4)^40)), exactly.
    let expect = rat(2) * (Ratio::one() + frac(4, 7) * (Ratio::one() - pow(&frac(3, 4), 40)));
    assert_eq!(diff, expect);
    let limit = rat(2) * (Ratio::one() + frac(4, 7));
    assert!(
        diff < limit,
        "finite-m difference must stay below the limit"
    );
    println!(
        "criterion 06 PASS: EOA pair difference equals \
         2(1+(4/7)(1-(3/4)^40)) = {} exactly and is below 2(1+4/7)",
        pagesmooth::rational::to_fraction_string(&diff)
    );
}

#[test]
fn criterion_07_smoothed_lru_curve_ensemble_and_pair() {
    // Hit probabilities for k=8, i=4 at every age 0..=12.
    let c84 = CacheConfig::with_smoothing(8, 4).unwrap();
    for age in 0..=12usize {
        let expect = if age < 4 {
            Ratio::one()
        } else if age < 12 {
            frac(12 - age as i64, 9)
        } else {
            Ratio::zero()
        };
        assert_eq!(smoothed_lru_hit_prob(Some(age), c84), expect, "age {age}");
    }
    assert_eq!(smoothed_lru_hit_prob(Some(7), c84), frac(5, 9));

    // Mixed strategy equals the analytic engine exactly on random inputs.
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0usize;
    for k in [3usize, 4, 5, 6] {
        for i in [1usize, 2] {
            let cache = CacheConfig::with_smoothing(k, i).unwrap();
            let alphabet = (k + i + 2) as u64;
            for _ in 0..50 {
                let s: RequestSequence = (0..20)
                    .map(|_| PageId(rng.gen_range(0..alphabet)))
                    .collect();
                let analytic = expected_smoothed_lru(cache, &s).unwrap();
                let ensemble = smoothed_lru_ensemble(cache, &s).unwrap();
                assert_eq!(analytic.value, ensemble.value, "k={k} i={i} s={s:?}");
                assert_eq!(analytic.per_request, ensemble.per_request);
                checked += 1;
            }
        }
    }

    // Pair difference equals delta * ((k+i)/(2i+1) + 1) exactly.
    for (k, i, delta) in [(8usize, 4usize, 1usize), (4, 1, 2), (5, 2, 3)] {
        let cache = CacheConfig::with_smoothing(k, i).unwrap();
        let pair = gen_smoothed_lru_pair(k, i, delta).unwrap();
        let diff = expected_smoothed_lru(cache, &pair.bad).unwrap().value
            - expected_smoothed_lru(cache, &pair.good).unwrap().value;
        let expect = rat(delta as i64) * (frac((k + i) as i64, (2 * i + 1) as i64) + Ratio::one());
        assert_eq!(diff, expect, "k={k} i={i} delta={delta}");
    }

    println!(
        "criterion 07 PASS: Eq-(1) hit table verified (5/9 at age 7); ensemble == \
         analytic on {checked} random sequences; pair difference exact"
    );
}

#[test]
fn criterion_08_lru_random_fixpoint_bound_audit_competitiveness() {
    let table = lru_random_distance_fixpoint(2, &default_tolerance()).unwrap();
    let expect: [(PairShape, Ratio); 6] = [
        (PairShape::Same, rat(0)),
        (PairShape::KeepMruNewLru, frac(3, 2)),
        (PairShape::Swapped, frac(1, 2)),
        (PairShape::LruToMruNewLru, frac(3, 2)),
        (PairShape::NewMruKeepLru, rat(2)),
        (PairShape::NewMruKeepMru, rat(2)),
    ];
    for (shape, value) in expect {
        assert_eq!(table.entry(shape).unwrap(), &value, "{}", shape.label());
    }

    let bound = lru_random_edit_bound(&table);
    assert_eq!(bound, frac(17, 6));

    let report = exhaustive_smoothness(
        &EngineEvaluator {
            kind: EngineKind::LruRandom,
            cfg: cfg(2),
        },
        cfg(2),
        3,
        6,
        1,
        None,
    )
    .unwrap();
    assert!(
        report.worst_increase <= frac(17, 6),
        "audited worst increase {} exceeds 17/6",
        report.worst_increase
    );

    let corpus = all_sequences(3, 0, 7);
    let violations = check_competitive(
        &EngineEvaluator {
            kind: EngineKind::LruRandom,
            cfg: cfg(2),
        },
        cfg(2),
        &rat(2),
        &rat(0),
        &corpus,
    )
    .unwrap();
    assert!(
        violations.is_empty(),
        "k*OPT violated on {:?}",
        violations[0].sequence
    );

    println!(
        "criterion 08 PASS: fixpoint table (0, 3/2, 1/2, 3/2, 2, 2); edit bound 17/6; \
         audited worst increase {} <= 17/6; 2*OPT holds on {} sequences",
        pagesmooth::rational::to_fraction_string(&report.worst_increase),
        corpus.len()
    );
}

#[test]
fn criterion_09_randomized_demand_adversary() {
    let out = gen_randomized_demand_lower(DemandEngineKind::Random, 2).unwrap();
    let floor = rat(2) + harmonic(2) + frac(1, 2); // = 4
    assert_eq!(floor, rat(4));
    assert!(
        out.bad_expected >= floor,
        "bad expectation {} below k + H_k + 1/k = 4",
        out.bad_expected
    );
    assert_eq!(out.good_expected, rat(2));
    assert_eq!(edit_distance(&out.pair.good, &out.pair.bad), 1);
    println!(
        "criterion 09 PASS: demand-Random adversary at k=2 reaches {} >= 4 expected \
         misses with good = 2 at edit distance 1",
        pagesmooth::rational::to_fraction_string(&out.bad_expected)
    );
}

#[test]
fn criterion_10_partition_equitable_layer_replication() {
    let out = gen_partition_equitable_pair(3).unwrap();
    let set = |pages: &[u64]| -> BTreeSet<PageId> { pages.iter().map(|&p| PageId(p)).collect() };

    // Prefix layers straight from the proof: bad fully revealed, good with
    // x = 3 and y = 4 folded into the last layer.
    assert_eq!(
        out.bad_prefix_layers.layers(),
        &[set(&[0]), set(&[1]), set(&[2])]
    );
    assert_eq!(
        out.good_prefix_layers.layers(),
        &[set(&[0]), set(&[1]), set(&[2, 3, 4])]
    );

    // Stepwise replay along the extension x, 0, y, k-1, 0.
    assert_eq!(out.extension, seq(&[3, 0, 4, 2, 0]));
    let bad_steps: Vec<Vec<BTreeSet<PageId>>> = vec![
        vec![set(&[3]), set(&[0, 1]), set(&[2])],
        vec![set(&[0]), set(&[3]), set(&[1, 2])],
        vec![set(&[4]), set(&[0, 3]), set(&[1, 2])],
        vec![set(&[2]), set(&[4]), set(&[0, 3])],
        vec![set(&[0]), set(&[2]), set(&[4])],
    ];
    let good_steps: Vec<Vec<BTreeSet<PageId>>> = vec![
        vec![set(&[3]), set(&[0]), set(&[1])],
        vec![set(&[0]), set(&[3]), set(&[1])],
        vec![set(&[4]), set(&[0, 3]), set(&[1])],
        vec![set(&[2]), set(&[0, 3, 4]), set(&[1])],
        vec![set(&[0]), set(&[2]), set(&[1, 3, 4])],
    ];
    for (step, expect) in out.bad_trace.iter().zip(bad_steps.iter()) {
        assert_eq!(step.layers(), expect.as_slice());
    }
    for (step, expect) in out.good_trace.iter().zip(good_steps.iter()) {
        assert_eq!(step.layers(), expect.as_slice());
    }

    // Final layers equal the initial ones up to renaming on both sides.
    assert!(layers_equal_up_to_renaming(
        out.good_trace.last().unwrap(),
        &out.good_prefix_layers
    ));
    assert!(layers_equal_up_to_renaming(
        out.bad_trace.last().unwrap(),
        &out.bad_prefix_layers
    ));

    // The k=2 instance reaches the proof's (2, 0147) / (2, 047) tables.
    let two = gen_partition_equitable_pair(2).unwrap();
    assert_eq!(
        two.bad_trace.last().unwrap().layers(),
        &[set(&[2]), set(&[0, 1, 4, 7])]
    );
    assert_eq!(
        two.good_trace.last().unwrap().layers(),
        &[set(&[2]), set(&[0, 4, 7])]
    );

    println!(
        "criterion 10 PASS: k=3 layer traces match the proof tables stepwise and \
         recycle up to renaming (expected-miss values intentionally not reproduced)"
    );
}

#[test]
fn criterion_11_composition_lemma_for_lru_and_belady() {
    for kind in [DetPolicyKind::Lru, DetPolicyKind::Belady] {
        let eval = PolicyEvaluator {
            kind: kind.clone(),
            cfg: cfg(2),
        };
        let at_one = exhaustive_smoothness(&eval, cfg(2), 3, 5, 1, None).unwrap();
        let at_two = exhaustive_smoothness(&eval, cfg(2), 3, 5, 2, None).unwrap();
        assert!(
            at_two.worst_increase <= rat(2) * &at_one.worst_increase,
            "{}: delta=2 worst {} exceeds twice delta=1 worst {}",
            kind.tag(),
            at_two.worst_increase,
            at_one.worst_increase
        );
        println!(
            "criterion 11 PASS ({}): delta=2 worst increase {} <= 2 x {} (delta=1)",
            kind.tag(),
            pagesmooth::rational::to_fraction_string(&at_two.worst_increase),
            pagesmooth::rational::to_fraction_string(&at_one.worst_increase)
        );
    }
}
