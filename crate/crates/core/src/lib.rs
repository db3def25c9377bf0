//! Paging policies under perturbation: simulators, exact expectation engines,
//! adversarial sequence constructions, and smoothness audits.
//!
//! The crate is organized around a small vocabulary:
//! - [`PageId`] / request sequences and their edit-distance geometry ([`edit`], [`phase`]),
//! - deterministic policy simulators with per-request traces ([`policies`]),
//! - exact expected-miss engines over state distributions ([`engines`]),
//! - generators for worst-case sequence pairs ([`adversaries`]),
//! - exhaustive smoothness and competitiveness audits ([`audit`], [`fixpoint`]).
//!
//! All exact computations use arbitrary-precision rationals ([`Ratio`]); Monte
//! Carlo estimation is the only place floating point appears.

pub mod adversaries;
pub mod audit;
pub mod corpus;
pub mod edit;
pub mod engines;
pub mod error;
pub mod fixpoint;
pub mod layers;
pub mod page;
pub mod phase;
pub mod policies;
pub mod rational;

pub use edit::{edit_distance, neighborhood, neighborhood_with_cap};
pub use error::Error;
pub use page::{CacheConfig, PageId, RequestSequence};
pub use phase::{phase_partition, PhasePartition};
pub use policies::{simulate, DetPolicyKind, Eviction, TraceResult};
pub use rational::Ratio;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
