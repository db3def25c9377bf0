//! Batch experiment runner: smoothness audits, proof-construction corpora,
//! hit-probability curves, Monte Carlo cross-checks, and the consolidated
//! bounds table, all reproducible from flags or a JSON config.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, OutputFormat};

#[derive(Debug, Parser)]
#[command(
    name = "pagesmooth",
    version,
    about = "Paging-policy smoothness laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every experiment; unset values fall back to the config
/// file, then to per-experiment defaults.
#[derive(Debug, Args)]
struct CommonFlags {
    /// JSON config file with ExperimentConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cache size in pages.
    #[arg(long)]
    k: Option<usize>,
    /// Smoothing parameter for Smoothed/Step-LRU.
    #[arg(long)]
    i: Option<usize>,
    /// Edit distance budget.
    #[arg(long)]
    delta: Option<usize>,
    /// Phase fill parameter of the Mark family.
    #[arg(long)]
    ell: Option<usize>,
    /// Palindrome half-length of the EOA family.
    #[arg(long)]
    m: Option<usize>,
    /// Cycle repetitions of the Random family.
    #[arg(long)]
    n: Option<usize>,
    /// Steady phase count of the Mark family.
    #[arg(long)]
    phases: Option<usize>,
    /// Extension rounds for the FIFO family.
    #[arg(long)]
    rounds: Option<usize>,
    /// Alphabet size for exhaustive audits (default k+2).
    #[arg(long)]
    alphabet: Option<usize>,
    /// Maximum base-sequence length for exhaustive audits.
    #[arg(long)]
    max_len: Option<usize>,
    /// Monte Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Monte Carlo seed (mandatory for mc-check).
    #[arg(long)]
    seed: Option<u64>,
    /// Inline request sequence, comma-separated page ids.
    #[arg(long)]
    sequence: Option<String>,
    /// Fixpoint tolerance denominator: tolerance = 1/denominator.
    #[arg(long)]
    tolerance_denominator: Option<u64>,
    /// Cap on evaluated (base, neighbor) pairs for exhaustive audits.
    #[arg(long)]
    budget: Option<usize>,
    /// Run the smoothness-conjecture probe up to this k (2..=4).
    #[arg(long)]
    probe_max_k: Option<usize>,
    /// Output file (atomic write); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

impl CommonFlags {
    fn resolve(self, experiment: &str) -> anyhow::Result<ExperimentConfig> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let overlay = ExperimentConfig {
            experiment: Some(experiment.to_string()),
            policy: None,
            family: None,
            k: self.k,
            i: self.i,
            delta: self.delta,
            ell: self.ell,
            m: self.m,
            n: self.n,
            phases: self.phases,
            rounds: self.rounds,
            alphabet: self.alphabet,
            max_len: self.max_len,
            trials: self.trials,
            seed: self.seed,
            sequence: self.sequence,
            tolerance_denominator: self.tolerance_denominator,
            budget: self.budget,
            probe_max_k: self.probe_max_k,
            out: self.out,
            format: self.format,
        };
        Ok(base.overridden_by(overlay))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exhaustive smoothness audit of one policy over a small space.
    Audit {
        /// Policy or engine tag (lru, fifo, fwf, belady, random,
        /// lru-random, mark, eoa, smoothed-lru, step-lru).
        #[arg(long)]
        policy: Option<String>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Emit a proof-construction sequence pair as JSON lines.
    Pairs {
        /// Family: det-lower, opt, fwf, fifo, random, mark, eoa,
        /// smoothed-lru, rand-demand-lower, partition-equitable.
        #[arg(long)]
        family: Option<String>,
        /// Target policy for det-lower (lru or fifo).
        #[arg(long)]
        policy: Option<String>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// CSV of age vs hit probability for LRU and Smoothed-LRU.
    Curves {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Consolidated desk-scale check of every bound in the results table.
    Table1 {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Monte Carlo estimate vs exact expectation for one sequence.
    McCheck {
        /// Randomized policy tag (random, lru-random, mark, eoa).
        #[arg(long)]
        policy: Option<String>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// LRU-Random k=2 distance-table fixpoint and the one-edit bound.
    Fixpoint {
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(core_err) = err.downcast_ref::<pagesmooth::Error>() {
        use pagesmooth::Error;
        match core_err {
            Error::AuditSpaceOverflow { .. }
            | Error::SearchSpaceOverflow { .. }
            | Error::DistributionOverflow { .. } => 3,
            Error::InvalidParameter(_) | Error::UnknownPolicy(_) | Error::Parse(_) => 2,
            _ => 1,
        }
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Audit { policy, common } => common.resolve("audit").and_then(|mut cfg| {
            if policy.is_some() {
                cfg.policy = policy;
            }
            commands::audit::run(&cfg)
        }),
        Command::Pairs {
            family,
            policy,
            common,
        } => common.resolve("pairs").and_then(|mut cfg| {
            if family.is_some() {
                cfg.family = family;
            }
            if policy.is_some() {
                cfg.policy = policy;
            }
            commands::pairs::run(&cfg)
        }),
        Command::Curves { common } => common
            .resolve("curves")
            .and_then(|cfg| commands::curves::run(&cfg)),
        Command::Table1 { common } => common
            .resolve("table1")
            .and_then(|cfg| commands::table1::run(&cfg)),
        Command::McCheck { policy, common } => common.resolve("mc-check").and_then(|mut cfg| {
            if policy.is_some() {
                cfg.policy = policy;
            }
            commands::mc_check::run(&cfg)
        }),
        Command::Fixpoint { common } => common
            .resolve("fixpoint")
            .and_then(|cfg| commands::fixpoint::run(&cfg)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
