//! Levenshtein distance and edit-distance neighborhoods.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::page::{PageId, RequestSequence};
use crate::Result;

/// Default cap on the size of an enumerated neighborhood.
pub const DEFAULT_NEIGHBORHOOD_CAP: usize = 1 << 22;

/// Levenshtein distance between two request sequences: the minimum number of
/// substitutions, insertions, or deletions transforming one into the other.
/// All three operations have unit cost.
pub fn edit_distance(a: &[PageId], b: &[PageId]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ac) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &bc) in b.iter().enumerate() {
            let cost = usize::from(ac != bc);
            cur[j + 1] = (cur[j] + 1).min(prev[j + 1] + 1).min(prev[j] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// All sequences at edit distance exactly one from `s` over `alphabet`,
/// including `s` itself is *not* guaranteed; callers union with `s`.
fn single_edits(s: &[PageId], alphabet: &BTreeSet<PageId>) -> BTreeSet<RequestSequence> {
    let mut out = BTreeSet::new();
    // Deletions.
    for i in 0..s.len() {
        let mut t = s.to_vec();
        t.remove(i);
        out.insert(t);
    }
    // Substitutions.
    for i in 0..s.len() {
        for &p in alphabet {
            if s[i] != p {
                let mut t = s.to_vec();
                t[i] = p;
                out.insert(t);
            }
        }
    }
    // Insertions.
    for i in 0..=s.len() {
        for &p in alphabet {
            let mut t = s.to_vec();
            t.insert(i, p);
            out.insert(t);
        }
    }
    out
}

/// The exact edit ball `{ s' over alphabet : edit_distance(s, s') <= delta }`,
/// deduplicated by sequence value. Every element is re-verified against
/// [`edit_distance`] before being returned.
pub fn neighborhood_with_cap(
    s: &[PageId],
    delta: usize,
    alphabet: &BTreeSet<PageId>,
    cap: usize,
) -> Result<BTreeSet<RequestSequence>> {
    if delta == 0 {
        return Err(Error::InvalidParameter("delta must be >= 1".into()));
    }
    if alphabet.is_empty() {
        return Err(Error::InvalidParameter("alphabet must be non-empty".into()));
    }
    let mut ball: BTreeSet<RequestSequence> = BTreeSet::new();
    ball.insert(s.to_vec());
    let mut frontier: BTreeSet<RequestSequence> = ball.clone();
    for _ in 0..delta {
        let mut next = BTreeSet::new();
        for t in &frontier {
            for e in single_edits(t, alphabet) {
                if !ball.contains(&e) {
                    next.insert(e);
                }
            }
            if ball.len() + next.len() > cap {
                return Err(Error::AuditSpaceOverflow { cap });
            }
        }
        ball.extend(next.iter().cloned());
        frontier = next;
    }
    // The closure of <=1 balls is exactly the <=delta ball; keep the check
    // anyway since callers rely on the membership contract.
    ball.retain(|t| edit_distance(s, t) <= delta);
    Ok(ball)
}

/// [`neighborhood_with_cap`] with the default cap.
pub fn neighborhood(
    s: &[PageId],
    delta: usize,
    alphabet: &BTreeSet<PageId>,
) -> Result<BTreeSet<RequestSequence>> {
    neighborhood_with_cap(s, delta, alphabet, DEFAULT_NEIGHBORHOOD_CAP)
}

/// Default audit alphabet `{0, .., k+1}`: every tightness construction needs
/// at most k+2 distinct pages per edit window.
pub fn default_alphabet(k: usize) -> BTreeSet<PageId> {
    (0..=(k as u64 + 1)).map(PageId).collect()
}

/// Alphabet of a given size `{0, .., n-1}`.
pub fn alphabet_of_size(n: usize) -> BTreeSet<PageId> {
    (0..n as u64).map(PageId).collect()
}
