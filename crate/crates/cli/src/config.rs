//! Experiment configuration: JSON config files with flag overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// All tunables an experiment can take. Subcommand flags override values
/// loaded from `--config`; every report embeds the resolved struct.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    pub policy: Option<String>,
    pub family: Option<String>,
    pub k: Option<usize>,
    pub i: Option<usize>,
    pub delta: Option<usize>,
    pub ell: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub phases: Option<usize>,
    pub rounds: Option<usize>,
    pub alphabet: Option<usize>,
    pub max_len: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub sequence: Option<String>,
    pub tolerance_denominator: Option<u64>,
    pub budget: Option<usize>,
    pub probe_max_k: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// Output renderings supported by the runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
    Csv,
}

impl ExperimentConfig {
    /// Load a JSON config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Overlay `other` (CLI flags) on top of `self`; set fields win.
    pub fn overridden_by(mut self, other: ExperimentConfig) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            experiment,
            policy,
            family,
            k,
            i,
            delta,
            ell,
            m,
            n,
            phases,
            rounds,
            alphabet,
            max_len,
            trials,
            seed,
            sequence,
            tolerance_denominator,
            budget,
            probe_max_k,
            out,
            format
        );
        self
    }

    pub fn require_k(&self) -> Result<usize> {
        match self.k {
            Some(k) if k >= 1 => Ok(k),
            Some(k) => bail!("k must be >= 1, got {k}"),
            None => bail!("missing required parameter: --k"),
        }
    }

    pub fn require_policy(&self) -> Result<&str> {
        self.policy
            .as_deref()
            .context("missing required parameter: --policy")
    }

    pub fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }
}

/// Write report content to `--out` (atomically: temp file + rename) or to
/// stdout when no path is configured.
pub fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp-write");
            std::fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
            std::fs::rename(&tmp, path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            Ok(())
        }
    }
}

/// Wrap a result payload with tool metadata and the resolved config.
pub fn report_envelope(config: &ExperimentConfig, result: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "tool": "pagesmooth",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "result": result,
    })
}
