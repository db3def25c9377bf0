//! `pagesmooth curves`: age vs hit-probability data for LRU and
//! Smoothed-LRU.

use std::fmt::Write as _;

use anyhow::Result;
use pagesmooth::engines::smoothed::{smoothed_lru_hit_prob, step_lru_hit_prob};
use pagesmooth::page::CacheConfig;
use pagesmooth::rational::{to_decimal_string, to_fraction_string};

use crate::config::{emit, ExperimentConfig};

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let k = cfg.require_k()?;
    let i = cfg.i.unwrap_or(0);
    let cache = CacheConfig::with_smoothing(k, i)?;
    let mut out =
        String::from("age,lru_hit,smoothed_lru_hit,smoothed_lru_hit_decimal,step_lru_hit\n");
    for age in 0..=(k + i + 1) {
        let lru = u8::from(age < k);
        let smoothed = smoothed_lru_hit_prob(Some(age), cache);
        let step = step_lru_hit_prob(Some(age), cache);
        let _ = writeln!(
            out,
            "{age},{lru},{},{},{}",
            to_fraction_string(&smoothed),
            to_decimal_string(&smoothed, 12),
            to_fraction_string(&step),
        );
    }
    emit(&cfg.out, &out)
}
