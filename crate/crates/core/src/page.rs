//! Pages, request sequences, and cache configuration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Identifier of a memory page. Total order, no upper bound assumed.
///
/// The top of the id space is reserved for internal sentinels (empty slots,
/// dummy pages of Det-Step-LRU); user requests must stay below
/// [`PageId::RESERVED_BASE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PageId(pub u64);

impl PageId {
    /// Smallest reserved id; ids at or above this value are sentinels.
    pub const RESERVED_BASE: u64 = u64::MAX - 1024;

    /// Sentinel marking an empty cache slot in canonical states.
    pub const EMPTY: PageId = PageId(u64::MAX);

    /// The j-th dummy page used by Det-Step-LRU's initial fill.
    pub fn dummy(j: usize) -> PageId {
        PageId(u64::MAX - 1 - j as u64)
    }

    /// True for sentinel ids (dummies and the empty-slot marker).
    pub fn is_reserved(self) -> bool {
        self.0 >= Self::RESERVED_BASE
    }
}

impl fmt::Display for PageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == PageId::EMPTY {
            write!(f, "EMPTY")
        } else if self.is_reserved() {
            write!(f, "DUMMY{}", u64::MAX - 1 - self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// An ordered list of page requests; the universal input of the crate.
pub type RequestSequence = Vec<PageId>;

/// Convenience constructor from raw ids.
pub fn seq(ids: &[u64]) -> RequestSequence {
    ids.iter().map(|&p| PageId(p)).collect()
}

/// Ensure a request sequence contains no reserved sentinel ids.
pub fn check_user_sequence(s: &[PageId]) -> Result<()> {
    for p in s {
        if p.is_reserved() {
            return Err(Error::ReservedPage(p.0));
        }
    }
    Ok(())
}

/// Cache geometry: size `k` plus the smoothing parameter `i` used by
/// Smoothed-LRU and Step-LRU (ignored by the other policies).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheConfig {
    /// Cache size in pages.
    pub k: usize,
    /// Smoothing parameter; `0 <= i < k`.
    pub i: usize,
}

impl CacheConfig {
    /// Config with smoothing disabled (`i = 0`).
    pub fn new(k: usize) -> Result<Self> {
        Self::with_smoothing(k, 0)
    }

    /// Config with an explicit smoothing parameter.
    pub fn with_smoothing(k: usize, i: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("cache size k must be >= 1".into()));
        }
        if i >= k {
            return Err(Error::InvalidParameter(format!(
                "smoothing parameter i = {i} must satisfy 0 <= i < k = {k}"
            )));
        }
        Ok(CacheConfig { k, i })
    }
}

/// Number of distinct pages in a sequence.
pub fn distinct_count(s: &[PageId]) -> usize {
    let mut set = std::collections::BTreeSet::new();
    set.extend(s.iter().copied());
    set.len()
}

/// Per-request ages: the number of distinct pages requested since each
/// request's previous occurrence (`None` = first request, age infinite).
///
/// A request faults under LRU exactly when its age is `>= k`.
pub fn request_ages(s: &[PageId]) -> Vec<Option<usize>> {
    let mut recency: Vec<PageId> = Vec::new();
    let mut ages = Vec::with_capacity(s.len());
    for &p in s {
        match recency.iter().position(|&q| q == p) {
            Some(idx) => {
                ages.push(Some(idx));
                recency.remove(idx);
                recency.insert(0, p);
            }
            None => {
                ages.push(None);
                recency.insert(0, p);
            }
        }
    }
    ages
}

/// Ages of all requested pages after serving `prefix` (page -> current age).
pub fn age_view(prefix: &[PageId]) -> std::collections::HashMap<PageId, usize> {
    let mut recency: Vec<PageId> = Vec::new();
    for &p in prefix {
        if let Some(idx) = recency.iter().position(|&q| q == p) {
            recency.remove(idx);
        }
        recency.insert(0, p);
    }
    recency
        .into_iter()
        .enumerate()
        .map(|(age, p)| (p, age))
        .collect()
}
