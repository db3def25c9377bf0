//! `pagesmooth fixpoint`: the LRU-Random k=2 distance table and the
//! mechanical one-edit bound.

use std::fmt::Write as _;

use anyhow::Result;
use pagesmooth::corpus::RatioRepr;
use pagesmooth::fixpoint::{
    conjecture_probe, default_tolerance, lru_random_distance_fixpoint, lru_random_edit_bound,
    ProbeRow,
};
use pagesmooth::rational::{to_decimal_string, to_fraction_string, Ratio};

use crate::config::{emit, report_envelope, ExperimentConfig, OutputFormat};

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let k = cfg.k.unwrap_or(2);
    let tolerance = match cfg.tolerance_denominator {
        Some(den) => Ratio::new(1.into(), den.into()),
        None => default_tolerance(),
    };
    let table = lru_random_distance_fixpoint(k, &tolerance)?;
    let bound = lru_random_edit_bound(&table);

    // Optional descriptive probe of larger caches; no pass/fail semantics.
    let probe: Vec<ProbeRow> = match cfg.probe_max_k {
        Some(max_k) => {
            let ks: Vec<usize> = (2..=max_k).collect();
            conjecture_probe(&ks, cfg.seed.unwrap_or(0))?
        }
        None => Vec::new(),
    };

    match cfg.format_or(OutputFormat::Json) {
        OutputFormat::Text => {
            let mut out = String::from("LRU-Random state distances (k = 2):\n");
            for (label, value) in table.rows() {
                let _ = writeln!(out, "  {label:18} {}", to_fraction_string(&value));
            }
            let _ = writeln!(out, "one-edit bound: {}", to_fraction_string(&bound));
            for row in &probe {
                let _ = writeln!(
                    out,
                    "probe k={} ({}, {} bases): worst one-edit increase {}",
                    row.k,
                    row.mode,
                    row.bases,
                    to_decimal_string(&row.worst_increase, 6)
                );
            }
            emit(&cfg.out, &out)
        }
        _ => {
            let rows: Vec<serde_json::Value> = table
                .rows()
                .into_iter()
                .map(|(label, value)| {
                    serde_json::json!({ "pair": label, "distance": RatioRepr::of(&value) })
                })
                .collect();
            let probe_rows: Vec<serde_json::Value> = probe
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "k": row.k,
                        "mode": row.mode,
                        "bases": row.bases,
                        "worst_increase": RatioRepr::of(&row.worst_increase),
                    })
                })
                .collect();
            let result = serde_json::json!({
                "distances": rows,
                "edit_bound": RatioRepr::of(&bound),
                "conjecture_probe": probe_rows,
            });
            let envelope = report_envelope(cfg, result);
            emit(
                &cfg.out,
                &format!("{}\n", serde_json::to_string_pretty(&envelope)?),
            )
        }
    }
}
