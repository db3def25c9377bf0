//! `pagesmooth table1`: one consolidated desk-scale check per bounds-table
//! row: declared bound, observed extremum, verdict.

use std::fmt::Write as _;

use anyhow::Result;
use num::One;
use pagesmooth::adversaries::{
    fifo_extension_misses, gen_det_demand_lower, gen_eoa_pair, gen_mark_pair,
    gen_partition_equitable_pair, gen_random_pair, gen_randomized_demand_lower,
    gen_smoothed_lru_pair, DemandEngineKind,
};
use pagesmooth::audit::{check_competitive, evaluator_from_tag, exhaustive_smoothness, Verdict};
use pagesmooth::engines::eoa::expected_eoa;
use pagesmooth::engines::smoothed::{expected_smoothed_lru, smoothed_lru_ensemble};
use pagesmooth::fixpoint::{
    default_tolerance, lru_random_distance_fixpoint, lru_random_edit_bound,
};
use pagesmooth::page::{CacheConfig, PageId};
use pagesmooth::policies::{simulate, DetPolicyKind};
use pagesmooth::rational::{frac, harmonic, rat, to_fraction_string, Ratio};

use crate::config::{emit, report_envelope, ExperimentConfig, OutputFormat};

struct Row {
    algorithm: String,
    bound: String,
    observed: String,
    status: String,
}

fn verdict_str(v: Option<Verdict>) -> String {
    match v {
        Some(Verdict::Tight) => "tight".into(),
        Some(Verdict::Holds) => "holds".into(),
        Some(Verdict::Violated) => "VIOLATED".into(),
        None => "-".into(),
    }
}

fn audit_row(
    tag: &str,
    display: &str,
    cache: CacheConfig,
    alphabet: usize,
    max_len: usize,
) -> Result<Row> {
    let evaluator = evaluator_from_tag(tag, cache)?;
    let bound = super::bound_for(tag, cache.k, cache.i, 1)?;
    let report = exhaustive_smoothness(
        evaluator.as_ref(),
        cache,
        alphabet,
        max_len,
        1,
        bound.clone(),
    )?;
    Ok(Row {
        algorithm: display.to_string(),
        bound: bound.map(|b| b.formula).unwrap_or_else(|| "-".into()),
        observed: format!(
            "worst increase {} (k={}, alphabet {alphabet}, len <= {max_len}, delta 1)",
            to_fraction_string(&report.worst_increase),
            cache.k
        ),
        status: verdict_str(report.verdict),
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let k = cfg.k.unwrap_or(2);
    let k2 = CacheConfig::new(2)?;
    let mut rows: Vec<Row> = Vec::new();

    // Class rows exhibited by the adaptive constructions.
    {
        let pair = gen_det_demand_lower(DetPolicyKind::Lru, CacheConfig::new(k)?, 1)?;
        let diff = pair.predicted.difference.clone().unwrap_or_else(Ratio::one);
        rows.push(Row {
            algorithm: "deterministic demand-paging (class lower bound)".into(),
            bound: "(1, delta*(k+1)) unbeatable".into(),
            observed: format!(
                "adaptive pair vs lru: miss difference {} at distance {}",
                to_fraction_string(&diff),
                pair.declared_distance
            ),
            status: "exhibited".into(),
        });
        let lower = gen_randomized_demand_lower(DemandEngineKind::Random, k)?;
        rows.push(Row {
            algorithm: "randomized demand-paging (class lower bound)".into(),
            bound: "(1, H_k + 1/k, 1) unbeatable".into(),
            observed: format!(
                "adversary vs demand-random: bad {} vs good {} (floor {})",
                to_fraction_string(&lower.bad_expected),
                to_fraction_string(&lower.good_expected),
                to_fraction_string(&(rat(k as i64) + harmonic(k) + frac(1, k as i64)))
            ),
            status: "exhibited".into(),
        });
        rows.push(Row {
            algorithm: "randomized strongly-competitive (class lower bound)".into(),
            bound: "(1, delta*H_k)".into(),
            observed: "-".into(),
            status: "out of scope -- see paper".into(),
        });
    }

    rows.push(audit_row("belady", "optimal offline", k2, 3, 6)?);
    rows.push(audit_row("lru", "LRU", k2, 3, 6)?);
    rows.push(audit_row("fwf", "FWF", k2, 3, 7)?);

    // FIFO: multiplicative lower bound via the reversed-configuration
    // extension, upper bound (k, 2*delta*k) via the competitive argument.
    {
        let fk = k.clamp(2, 5);
        let rounds = cfg.rounds.unwrap_or(200);
        let ext = fifo_extension_misses(fk, rounds)?;
        let ratio = ext.bad_extension_misses as f64 / ext.good_extension_misses as f64;
        let upper = audit_row("fifo", "FIFO", k2, 3, 6)?;
        rows.push(Row {
            algorithm: "FIFO".into(),
            bound: "not (k-eps, gamma, 1)-smooth; upper (k, 2*delta*k)".into(),
            observed: format!(
                "extension miss ratio {ratio:.3} over {rounds} rounds (k={fk}); {}",
                upper.observed
            ),
            status: format!("lower exhibited; upper {}", upper.status),
        });
    }

    // Mark: shifted-phase ratio family plus the competitive upper bound.
    {
        let mk = if k >= 4 { k.min(16) } else { 8 };
        let ell = harmonic(mk).ceil().to_integer();
        let ell = usize::try_from(ell.clone()).unwrap_or(2).clamp(2, mk - 1);
        let pair = gen_mark_pair(mk, ell, 4)?;
        let bad_cost = pagesmooth::engines::mark::mark_bad_phase_cost(mk, ell);
        let good_cost = pagesmooth::engines::mark::mark_good_phase_cost(mk, ell);
        let ratio = &bad_cost / &good_cost;
        let eval = evaluator_from_tag("mark", k2)?;
        let corpus: Vec<Vec<PageId>> = pagesmooth::audit::canonical_sequences(3, 6);
        let c = rat(2) * harmonic(2) - Ratio::one();
        let violations = check_competitive(eval.as_ref(), k2, &c, &Ratio::one(), &corpus)?;
        rows.push(Row {
            algorithm: "Mark".into(),
            bound: "lower (Omega(H_k), gamma, 1); upper (2H_k-1, delta*(4H_k-2))".into(),
            observed: format!(
                "phase-cost ratio {} at k={mk}, l={ell} (pair of {} requests); competitive check violations: {}",
                to_fraction_string(&ratio),
                pair.bad.len(),
                violations.len()
            ),
            status: if violations.is_empty() {
                "lower exhibited; upper holds".into()
            } else {
                "VIOLATED".into()
            },
        });
    }

    rows.push(audit_row("random", "Random", k2, 3, 6)?);

    // Random: the asymptotic pair approaches k+1 per edit.
    {
        let rk = 3;
        let pair = gen_random_pair(rk, 1, cfg.n.unwrap_or(50))?;
        let cache = CacheConfig::new(rk)?;
        let eval = evaluator_from_tag("random", cache)?;
        let diff = eval.misses(&pair.bad)? - eval.misses(&pair.good)?;
        rows.push(Row {
            algorithm: "Random (lower-bound family)".into(),
            bound: "(1, delta*(k+1)) tight".into(),
            observed: format!(
                "pair difference {} -> limit {} (k={rk}, n=50)",
                pagesmooth::rational::to_decimal_string(&diff, 9),
                to_fraction_string(&rat(rk as i64 + 1))
            ),
            status: "exhibited".into(),
        });
    }

    // EOA: exact closed-form difference.
    {
        let (ek, m, delta) = (4, 20, 2);
        let pair = gen_eoa_pair(ek, m, delta)?;
        let cache = CacheConfig::new(ek)?;
        let diff = expected_eoa(cache, &pair.bad)?.value - expected_eoa(cache, &pair.good)?.value;
        let predicted = pair.predicted.difference.clone().expect("closed form");
        rows.push(Row {
            algorithm: "Evict-On-Access".into(),
            bound: "(1, delta*(1+k/(2k-1))) tight".into(),
            observed: format!(
                "pair difference {} equals the closed form exactly: {} (k={ek}, m={m}, delta={delta})",
                pagesmooth::rational::to_decimal_string(&diff, 9),
                diff == predicted
            ),
            status: if diff == predicted { "tight".into() } else { "VIOLATED".into() },
        });
    }

    // Smoothed-LRU: exact pair difference plus the mixed-strategy identity.
    {
        let (sk, si) = (8, 4);
        let cache = CacheConfig::with_smoothing(sk, si)?;
        let pair = gen_smoothed_lru_pair(sk, si, 1)?;
        let diff = expected_smoothed_lru(cache, &pair.bad)?.value
            - expected_smoothed_lru(cache, &pair.good)?.value;
        let predicted = pair.predicted.difference.clone().expect("closed form");
        let small = CacheConfig::with_smoothing(4, 2)?;
        let probe: Vec<PageId> = (0..14u64).map(|t| PageId(t * 7 % 6)).collect();
        let ensemble_ok = smoothed_lru_ensemble(small, &probe)?.value
            == expected_smoothed_lru(small, &probe)?.value;
        rows.push(Row {
            algorithm: "Smoothed-LRU".into(),
            bound: "(1, delta*((k+i)/(2i+1)+1)) tight".into(),
            observed: format!(
                "pair difference {} vs closed form {} (k={sk}, i={si}); ensemble identity: {}",
                to_fraction_string(&diff),
                to_fraction_string(&predicted),
                ensemble_ok
            ),
            status: if diff == predicted && ensemble_ok {
                "tight".into()
            } else {
                "VIOLATED".into()
            },
        });
    }

    // LRU-Random at k = 2: fixpoint bound plus the exhaustive audit.
    {
        let table = lru_random_distance_fixpoint(2, &default_tolerance())?;
        let bound = lru_random_edit_bound(&table);
        let eval = evaluator_from_tag("lru-random", k2)?;
        let report = exhaustive_smoothness(
            eval.as_ref(),
            k2,
            3,
            6,
            1,
            super::bound_for("lru-random", 2, 0, 1)?,
        )?;
        rows.push(Row {
            algorithm: "LRU-Random (k=2)".into(),
            bound: "(1, 17*delta/6)".into(),
            observed: format!(
                "mechanical bound {}; audited worst increase {}",
                to_fraction_string(&bound),
                to_fraction_string(&report.worst_increase)
            ),
            status: if bound == frac(17, 6) && report.verdict != Some(Verdict::Violated) {
                "holds".into()
            } else {
                "VIOLATED".into()
            },
        });
    }

    // Partition/Equitable: layer bookkeeping only.
    {
        let out = gen_partition_equitable_pair(3)?;
        let trace_len = out.extension.len();
        rows.push(Row {
            algorithm: "Partition / Equitable".into(),
            bound: "not (1+eps, gamma, 1)-smooth; upper (H_k, 2*delta*H_k)".into(),
            observed: format!(
                "layer replication verified over a {trace_len}-request extension (k=3)"
            ),
            status: "structural only; expected misses out of scope -- see paper".into(),
        });
    }

    // Deterministic competitive upper bound, implied by OPT smoothness.
    {
        let eval = evaluator_from_tag("lru", k2)?;
        let corpus = pagesmooth::audit::canonical_sequences(3, 7);
        let violations = check_competitive(eval.as_ref(), k2, &rat(2), &rat(2), &corpus)?;
        rows.push(Row {
            algorithm: "det. c-competitive (class upper bound)".into(),
            bound: "(c, 2*delta*c + beta)".into(),
            observed: format!(
                "lru is (k, k)-competitive on the exhaustive small corpus: {} violations",
                violations.len()
            ),
            status: if violations.is_empty() {
                "holds".into()
            } else {
                "VIOLATED".into()
            },
        });
    }

    // Sanity: FWF is not 1-competitive, illustrating why the class bound
    // needs the multiplicative factor.
    {
        let eval = evaluator_from_tag("fwf", k2)?;
        let witness = vec![pagesmooth::page::seq(&[1, 2, 3, 1])];
        let violations = check_competitive(eval.as_ref(), k2, &Ratio::one(), &rat(0), &witness)?;
        let trace = simulate(&DetPolicyKind::Fwf, k2, &witness[0])?;
        rows.push(Row {
            algorithm: "FWF vs OPT spot check".into(),
            bound: "(1, 0)-competitiveness must fail".into(),
            observed: format!(
                "fwf misses {} vs opt 3 on [1,2,3,1]; violations reported: {}",
                trace.miss_count,
                violations.len()
            ),
            status: if violations.len() == 1 {
                "as expected".into()
            } else {
                "VIOLATED".into()
            },
        });
    }

    let content = match cfg.format_or(OutputFormat::Text) {
        OutputFormat::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "algorithm": r.algorithm,
                        "bound": r.bound,
                        "observed": r.observed,
                        "status": r.status,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&report_envelope(cfg, serde_json::json!(json_rows)))?
            )
        }
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "{:-<120}", "");
            for r in &rows {
                let _ = writeln!(out, "{}", r.algorithm);
                let _ = writeln!(out, "    bound    : {}", r.bound);
                let _ = writeln!(out, "    observed : {}", r.observed);
                let _ = writeln!(out, "    status   : {}", r.status);
            }
            let _ = writeln!(out, "{:-<120}", "");
            out
        }
    };
    emit(&cfg.out, &content)
}
