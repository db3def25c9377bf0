//! `pagesmooth pairs`: emit proof-construction sequence pairs as JSON lines.

use anyhow::{bail, Context, Result};
use pagesmooth::adversaries::{
    build_fifo_construction, extension_from, fifo_extension_misses, gen_det_demand_lower,
    gen_eoa_pair, gen_fwf_pair, gen_mark_pair, gen_opt_pair, gen_partition_equitable_pair,
    gen_random_pair, gen_randomized_demand_lower, gen_smoothed_lru_pair, DemandEngineKind,
    SequencePair,
};
use pagesmooth::corpus::sequence_to_line;
use pagesmooth::page::CacheConfig;
use pagesmooth::policies::DetPolicyKind;

use crate::config::{emit, ExperimentConfig};

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let family = cfg
        .family
        .as_deref()
        .context("missing required parameter: --family")?;
    let k = cfg.require_k()?;
    let delta = cfg.delta.unwrap_or(1);

    let mut extra = serde_json::Map::new();
    let pair: SequencePair = match family {
        "det-lower" => {
            let policy = match cfg.policy.as_deref().unwrap_or("lru") {
                "lru" => DetPolicyKind::Lru,
                "fifo" => DetPolicyKind::Fifo,
                other => bail!("det-lower supports lru or fifo, got {other}"),
            };
            gen_det_demand_lower(policy, CacheConfig::new(k)?, delta)?
        }
        "opt" => gen_opt_pair(k, delta)?,
        "fwf" => gen_fwf_pair(k, delta)?,
        "fifo" => {
            let built = build_fifo_construction(k)?;
            let rounds = cfg.rounds.unwrap_or(0);
            if rounds > 0 {
                let ext = extension_from(&built, rounds);
                let misses = fifo_extension_misses(k, rounds)?;
                extra.insert("extension".into(), sequence_to_line(&ext).into());
                extra.insert("extension_misses".into(), serde_json::to_value(&misses)?);
            }
            extra.insert(
                "good_final".into(),
                sequence_to_line(&built.good_final).into(),
            );
            extra.insert(
                "bad_final".into(),
                sequence_to_line(&built.bad_final).into(),
            );
            built.pair
        }
        "random" => gen_random_pair(k, delta, cfg.n.unwrap_or(30))?,
        "mark" => gen_mark_pair(k, cfg.ell.unwrap_or(2), cfg.phases.unwrap_or(4))?,
        "eoa" => gen_eoa_pair(k, cfg.m.unwrap_or(10), delta)?,
        "smoothed-lru" => gen_smoothed_lru_pair(k, cfg.i.unwrap_or(0), delta)?,
        "rand-demand-lower" => {
            let engine = match cfg.policy.as_deref().unwrap_or("random-demand") {
                "random-demand" | "random" => DemandEngineKind::Random,
                "lru-random-demand" | "lru-random" => DemandEngineKind::LruRandom,
                other => bail!("rand-demand-lower supports random or lru-random, got {other}"),
            };
            let out = gen_randomized_demand_lower(engine, k)?;
            extra.insert(
                "bad_expected".into(),
                pagesmooth::rational::to_fraction_string(&out.bad_expected).into(),
            );
            out.pair
        }
        "partition-equitable" => {
            let out = gen_partition_equitable_pair(k)?;
            extra.insert("extension".into(), sequence_to_line(&out.extension).into());
            extra.insert(
                "good_final_layer_sizes".into(),
                serde_json::to_value(out.good_trace.last().unwrap().size_vector())?,
            );
            extra.insert(
                "bad_final_layer_sizes".into(),
                serde_json::to_value(out.bad_trace.last().unwrap().size_vector())?,
            );
            out.pair
        }
        other => bail!("unknown pair family: {other}"),
    };

    let mut record = serde_json::to_value(pair.to_record())?;
    if !extra.is_empty() {
        record
            .as_object_mut()
            .expect("record is an object")
            .insert("details".into(), serde_json::Value::Object(extra));
    }
    emit(&cfg.out, &format!("{}\n", serde_json::to_string(&record)?))
}
