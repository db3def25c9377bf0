//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by simulators, engines, generators, and audits.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Neighborhood enumeration would exceed the configured cap.
    #[error("audit space overflow: neighborhood would exceed {cap} sequences")]
    AuditSpaceOverflow { cap: usize },

    /// The offline brute-force search exceeded its node budget.
    #[error("search space overflow: exceeded {cap} explored nodes")]
    SearchSpaceOverflow { cap: usize },

    /// An exact state distribution grew past the configured cap.
    #[error("distribution size overflow: {size} states exceeds cap {cap}")]
    DistributionOverflow { size: usize, cap: usize },

    /// The requested operation needs a demand-paging policy.
    #[error("policy {0} is not usable here: demand-paging online policy required")]
    NotDemandPaging(String),

    /// A request named a reserved sentinel id (dummy page or empty slot).
    #[error("request to reserved page id {0}")]
    ReservedPage(u64),

    /// A generator's self-validation failed; the construction is wrong.
    #[error("construction validation failed: {0}")]
    ConstructionFailed(String),

    /// Kleene iteration did not converge within the iteration cap.
    #[error("fixpoint iteration did not converge within {0} rounds")]
    NonConvergence(usize),

    /// The adversary's subphase loop hit its safety cap.
    #[error("adversary subphase loop exceeded {0} iterations")]
    AdversaryCapReached(usize),

    /// A policy tag was not recognized.
    #[error("unknown policy tag: {0}")]
    UnknownPolicy(String),

    /// Malformed input while parsing sequences or corpora.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
