//! `pagesmooth mc-check`: Monte Carlo estimate vs exact expectation.

use anyhow::{bail, Context, Result};
use pagesmooth::corpus::{sequence_from_line, RatioRepr};
use pagesmooth::engines::enumerate::enumerate_eoa;
use pagesmooth::engines::eoa::expected_eoa;
use pagesmooth::engines::lru_random::expected_lru_random;
use pagesmooth::engines::mark::expected_mark;
use pagesmooth::engines::monte_carlo::{monte_carlo, z_score};
use pagesmooth::engines::random::expected_random;
use pagesmooth::engines::RandomizedPolicy;
use pagesmooth::page::CacheConfig;

use crate::config::{emit, report_envelope, ExperimentConfig};

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let tag = cfg.require_policy()?;
    let policy = RandomizedPolicy::from_tag(tag)
        .ok_or_else(|| pagesmooth::Error::UnknownPolicy(tag.to_string()))?;
    let k = cfg.require_k()?;
    let cache = CacheConfig::new(k)?;
    let seq_text = cfg
        .sequence
        .as_deref()
        .context("missing required parameter: --sequence")?;
    let s = sequence_from_line(seq_text)?;
    let trials = cfg.trials.unwrap_or(100_000);
    let seed = match cfg.seed {
        Some(seed) => seed,
        None => bail!("--seed is mandatory for Monte Carlo experiments"),
    };

    let exact = match policy {
        RandomizedPolicy::Random => expected_random(cache, &s, false)?,
        RandomizedPolicy::LruRandom => expected_lru_random(cache, &s)?,
        RandomizedPolicy::Mark => expected_mark(cache, &s)?,
        RandomizedPolicy::Eoa => {
            // Cross-check the closed form against the process enumeration
            // before trusting either.
            let formula = expected_eoa(cache, &s)?;
            let process = enumerate_eoa(cache, &s)?;
            if formula.value != process.value {
                bail!("EOA closed form and enumeration disagree");
            }
            formula
        }
    };
    let estimate = monte_carlo(policy, cache, &s, trials, seed)?;
    let z = z_score(&estimate, &exact.value);

    let result = serde_json::json!({
        "policy": policy.tag(),
        "sequence": seq_text,
        "exact": RatioRepr::of(&exact.value),
        "estimate": estimate,
        "z_score": z,
        "within_three_std_errors": z.abs() <= 3.0,
    });
    let envelope = report_envelope(cfg, result);
    emit(
        &cfg.out,
        &format!("{}\n", serde_json::to_string_pretty(&envelope)?),
    )
}
