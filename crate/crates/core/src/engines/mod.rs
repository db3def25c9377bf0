//! Exact expected-miss engines and Monte Carlo estimation.
//!
//! The exact engines evolve a probability distribution over canonical cache
//! states (or apply a closed-form per-request law) in arbitrary-precision
//! rational arithmetic. Monte Carlo lives in [`monte_carlo`] and is the only
//! floating-point path.

pub mod enumerate;
pub mod eoa;
pub mod lru_random;
pub mod mark;
pub mod monte_carlo;
pub mod random;
pub mod smoothed;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::Ratio;

/// Default cap on the number of states an exact distribution may hold.
/// Exceeding it is an explicit error, never silent truncation.
pub const DEFAULT_DISTRIBUTION_CAP: usize = 1_000_000;

/// Exact expected fault count plus the per-request fault probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedMisses {
    /// Expected number of faults; always the sum of `per_request`.
    pub value: Ratio,
    /// Fault probability of each request, in order.
    pub per_request: Vec<Ratio>,
}

impl ExpectedMisses {
    /// Build from per-request probabilities; the total is derived.
    pub fn from_per_request(per_request: Vec<Ratio>) -> Self {
        let value = per_request.iter().fold(Ratio::zero(), |a, b| a + b);
        ExpectedMisses { value, per_request }
    }
}

/// Tags for the randomized policies the crate can evaluate stochastically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomizedPolicy {
    /// Uniform slot eviction on every fault (non-demand variant).
    Random,
    /// Recency-weighted eviction: i-th oldest slot with probability 1/(i·H_k).
    LruRandom,
    /// Marking with uniform eviction among unmarked pages.
    Mark,
    /// Evict-on-access: a 1/k eviction lottery on every request.
    Eoa,
}

impl RandomizedPolicy {
    /// Parse a CLI/report tag.
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "random" => Some(RandomizedPolicy::Random),
            "lru-random" => Some(RandomizedPolicy::LruRandom),
            "mark" => Some(RandomizedPolicy::Mark),
            "eoa" => Some(RandomizedPolicy::Eoa),
            _ => None,
        }
    }

    /// Report tag.
    pub fn tag(&self) -> &'static str {
        match self {
            RandomizedPolicy::Random => "random",
            RandomizedPolicy::LruRandom => "lru-random",
            RandomizedPolicy::Mark => "mark",
            RandomizedPolicy::Eoa => "eoa",
        }
    }
}
