//! k-phase partition of request sequences.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::page::PageId;

/// The k-phase partition of a sequence: maximal contiguous segments, each
/// holding at most k distinct pages; a new phase starts when the (k+1)-th
/// distinct page since the beginning of the previous phase is requested.
///
/// The empty sequence has zero phases by convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePartition {
    /// Start index of each phase; the first phase starts at 0.
    pub boundaries: Vec<usize>,
    /// Number of phases.
    pub phase_count: usize,
    /// Distinct pages in the last phase (0 for the empty sequence).
    pub last_phase_distinct: usize,
}

impl PhasePartition {
    /// Half-open index range of phase `idx`.
    pub fn phase_range(&self, idx: usize, seq_len: usize) -> std::ops::Range<usize> {
        let start = self.boundaries[idx];
        let end = self.boundaries.get(idx + 1).copied().unwrap_or(seq_len);
        start..end
    }
}

/// Compute the k-phase partition of `s`.
pub fn phase_partition(s: &[PageId], k: usize) -> PhasePartition {
    assert!(k >= 1, "cache size k must be >= 1");
    if s.is_empty() {
        return PhasePartition {
            boundaries: Vec::new(),
            phase_count: 0,
            last_phase_distinct: 0,
        };
    }
    let mut boundaries = vec![0usize];
    let mut current: BTreeSet<PageId> = BTreeSet::new();
    for (idx, &p) in s.iter().enumerate() {
        if !current.contains(&p) && current.len() == k {
            boundaries.push(idx);
            current.clear();
        }
        current.insert(p);
    }
    PhasePartition {
        phase_count: boundaries.len(),
        last_phase_distinct: current.len(),
        boundaries,
    }
}
