//! Layer representation of the paging work function.
//!
//! A layer representation is a list of k disjoint page sets (L_1, .., L_k).
//! Serving a request updates it by one of three rules: a page in an inner
//! layer merges its layer with the next one, a page in the last layer
//! rotates, and a fresh page merges the first two layers. Layers may be
//! empty while the representation warms up from an empty cache.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::page::PageId;

/// The k-set work-function summary used by Partition/Equitable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRepresentation {
    layers: Vec<BTreeSet<PageId>>,
}

impl LayerRepresentation {
    /// The empty representation for a cache of size k.
    pub fn empty(k: usize) -> Self {
        assert!(k >= 1);
        LayerRepresentation {
            layers: vec![BTreeSet::new(); k],
        }
    }

    /// Build from explicit layers; panics unless they are k disjoint sets.
    pub fn from_layers(layers: Vec<BTreeSet<PageId>>) -> Self {
        let rep = LayerRepresentation { layers };
        assert!(rep.is_well_formed(), "layers must be pairwise disjoint");
        rep
    }

    /// Number of layers (= cache size k).
    pub fn k(&self) -> usize {
        self.layers.len()
    }

    /// Read-only view of the layers.
    pub fn layers(&self) -> &[BTreeSet<PageId>] {
        &self.layers
    }

    /// Sizes of the layers, first to last.
    pub fn size_vector(&self) -> Vec<usize> {
        self.layers.iter().map(BTreeSet::len).collect()
    }

    /// Pairwise disjointness check.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = BTreeSet::new();
        for layer in &self.layers {
            for &p in layer {
                if !seen.insert(p) {
                    return false;
                }
            }
        }
        true
    }

    fn layer_of(&self, p: PageId) -> Option<usize> {
        self.layers.iter().position(|l| l.contains(&p))
    }
}

/// Apply the three-case update rule for a request to `p`.
pub fn layer_update(rep: &LayerRepresentation, p: PageId) -> LayerRepresentation {
    let k = rep.k();
    let layers = rep.layers();
    let mut out: Vec<BTreeSet<PageId>> = Vec::with_capacity(k);
    let singleton: BTreeSet<PageId> = [p].into_iter().collect();
    match rep.layer_of(p) {
        // p in L_j, j < k: (p, L_1, .., L_{j-1}, L_j ∪ L_{j+1} - {p}, L_{j+2}, .., L_k)
        Some(j) if j + 1 < k => {
            out.push(singleton);
            out.extend(layers[..j].iter().cloned());
            let mut merged: BTreeSet<PageId> = layers[j].union(&layers[j + 1]).copied().collect();
            merged.remove(&p);
            out.push(merged);
            out.extend(layers[j + 2..].iter().cloned());
        }
        // p in L_k: rotate to (p, L_1, .., L_{k-1})
        Some(_) => {
            out.push(singleton);
            out.extend(layers[..k - 1].iter().cloned());
        }
        // p fresh: (p, L_1 ∪ L_2, L_3, .., L_k)
        None => {
            out.push(singleton);
            if k >= 2 {
                out.push(layers[0].union(&layers[1]).copied().collect());
                out.extend(layers[2..].iter().cloned());
            }
        }
    }
    LayerRepresentation::from_layers(out)
}

/// True when a page bijection maps `a`'s layers onto `b`'s positionwise;
/// with disjointness this is exactly equality of the size vectors.
pub fn layers_equal_up_to_renaming(a: &LayerRepresentation, b: &LayerRepresentation) -> bool {
    a.size_vector() == b.size_vector()
}

/// Replay a request sequence from a starting representation, returning the
/// state after every request (excluding the start).
pub fn layer_trace(start: &LayerRepresentation, s: &[PageId]) -> Vec<LayerRepresentation> {
    let mut out = Vec::with_capacity(s.len());
    let mut cur = start.clone();
    for &p in s {
        cur = layer_update(&cur, p);
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(layers: &[&[u64]]) -> LayerRepresentation {
        LayerRepresentation::from_layers(
            layers
                .iter()
                .map(|l| l.iter().map(|&p| PageId(p)).collect())
                .collect(),
        )
    }

    #[test]
    fn fresh_page_merges_first_two_layers() {
        let next = layer_update(&rep(&[&[0], &[1], &[2]]), PageId(3));
        assert_eq!(next, rep(&[&[3], &[0, 1], &[2]]));
    }

    #[test]
    fn last_layer_rotates() {
        let next = layer_update(&rep(&[&[0], &[1], &[2]]), PageId(2));
        assert_eq!(next, rep(&[&[2], &[0], &[1]]));
    }

    #[test]
    fn inner_layer_merges_with_successor() {
        let next = layer_update(&rep(&[&[0], &[1], &[2]]), PageId(1));
        assert_eq!(next, rep(&[&[1], &[0], &[2]]));
    }

    #[test]
    fn update_preserves_layer_count_and_disjointness() {
        let mut cur = LayerRepresentation::empty(3);
        for p in [9, 4, 2, 9, 7, 4, 1, 2, 9] {
            cur = layer_update(&cur, PageId(p));
            assert_eq!(cur.k(), 3);
            assert!(cur.is_well_formed());
        }
    }

    #[test]
    fn renaming_equality_is_size_vector_equality() {
        assert!(layers_equal_up_to_renaming(
            &rep(&[&[0], &[1, 2]]),
            &rep(&[&[5], &[7, 9]])
        ));
        assert!(!layers_equal_up_to_renaming(
            &rep(&[&[0], &[1, 2]]),
            &rep(&[&[0, 1], &[2]])
        ));
    }
}
