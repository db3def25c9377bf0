//! `pagesmooth audit`: exhaustive smoothness of one policy.

use anyhow::Result;
use pagesmooth::audit::{
    evaluator_from_tag, exhaustive_smoothness_with_budget, DEFAULT_AUDIT_BUDGET,
};
use pagesmooth::page::CacheConfig;

use crate::config::{emit, report_envelope, ExperimentConfig, OutputFormat};

pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let policy = cfg.require_policy()?.to_string();
    let k = cfg.require_k()?;
    let smoothing = cfg.i.unwrap_or(0);
    let cache = CacheConfig::with_smoothing(k, smoothing)?;
    let alphabet = cfg.alphabet.unwrap_or(k + 2);
    let max_len = cfg.max_len.unwrap_or(2 * k + 2);
    let delta = cfg.delta.unwrap_or(1);

    let evaluator = evaluator_from_tag(&policy, cache)?;
    let bound = super::bound_for(&policy, k, smoothing, delta)?;
    let budget = cfg.budget.unwrap_or(DEFAULT_AUDIT_BUDGET);
    let report = exhaustive_smoothness_with_budget(
        evaluator.as_ref(),
        cache,
        alphabet,
        max_len,
        delta,
        bound,
        budget,
    )?;

    let content = match cfg.format_or(OutputFormat::Json) {
        OutputFormat::Text => report.render_text(),
        _ => {
            let envelope = report_envelope(cfg, report.to_json());
            format!("{}\n", serde_json::to_string_pretty(&envelope)?)
        }
    };
    emit(&cfg.out, &content)
}
