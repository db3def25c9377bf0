//! The Partition/Equitable non-smoothness sequence family, replicated at the
//! level of work-function layers.
//!
//! Two prefixes at edit distance one leave the layer representation in two
//! different shapes (one fully revealed, one with the last layer holding
//! three pages). A fixed extension block then returns both representations
//! to their starting shapes up to renaming, so it can be repeated forever.
//! Expected miss values of the policies themselves are out of scope; the
//! generator replays and validates the layer bookkeeping only.

use serde_json::json;

use crate::adversaries::{Predicted, SequencePair};
use crate::error::Error;
use crate::layers::{layer_trace, layers_equal_up_to_renaming, LayerRepresentation};
use crate::page::{PageId, RequestSequence};
use crate::Result;

/// Prefix pair, shared extension block, and the layer traces along the
/// extension for both sides.
#[derive(Debug, Clone)]
pub struct PartitionEquitablePair {
    pub pair: SequencePair,
    pub extension: RequestSequence,
    /// Layers after the good / bad prefix.
    pub good_prefix_layers: LayerRepresentation,
    pub bad_prefix_layers: LayerRepresentation,
    /// Layers after each extension request.
    pub good_trace: Vec<LayerRepresentation>,
    pub bad_trace: Vec<LayerRepresentation>,
}

/// Build the pair for cache size k (k >= 2).
pub fn gen_partition_equitable_pair(k: usize) -> Result<PartitionEquitablePair> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "partition/equitable pair needs k >= 2".into(),
        ));
    }
    let (good, bad, extension) = if k == 2 {
        (
            crate::page::seq(&[3, 2, 1, 0]),
            crate::page::seq(&[4, 3, 2, 1, 0]),
            crate::page::seq(&[4, 5, 6, 7, 1, 4, 7, 0, 2]),
        )
    } else {
        let x = PageId(k as u64);
        let y = PageId(k as u64 + 1);
        let desc = |hi: usize| (0..=hi).rev().map(|p| PageId(p as u64));
        // good: y, x, k-1, .., 0, k-2, .., 0. bad repeats from k-1 instead.
        let mut good: RequestSequence = vec![y, x];
        good.extend(desc(k - 1));
        good.extend(desc(k - 2));
        let mut bad: RequestSequence = vec![y, x];
        bad.extend(desc(k - 1));
        bad.extend(desc(k - 1));
        // Extension: x, 0..k-3 ascending, y, k-1, then k-3..0 descending.
        let mut extension: RequestSequence = vec![x];
        extension.extend((0..=k as u64 - 3).map(PageId));
        extension.push(y);
        extension.push(PageId(k as u64 - 1));
        extension.extend((0..=k as u64 - 3).rev().map(PageId));
        (good, bad, extension)
    };

    let empty = LayerRepresentation::empty(k);
    let good_prefix_layers = layer_trace(&empty, &good).pop().expect("non-empty prefix");
    let bad_prefix_layers = layer_trace(&empty, &bad).pop().expect("non-empty prefix");

    // Shape checks. For k >= 3 the bad prefix reveals every page and the
    // good prefix hides x and y inside the last layer; the special k = 2
    // pair instead ends with four and three pages in the second layer.
    let (good_expect, bad_expect) = if k == 2 {
        (vec![1, 3], vec![1, 4])
    } else {
        let mut g = vec![1usize; k - 1];
        g.push(3);
        (g, vec![1usize; k])
    };
    if bad_prefix_layers.size_vector() != bad_expect {
        return Err(Error::ConstructionFailed(format!(
            "bad prefix layers have sizes {:?}, expected {:?}",
            bad_prefix_layers.size_vector(),
            bad_expect
        )));
    }
    if good_prefix_layers.size_vector() != good_expect {
        return Err(Error::ConstructionFailed(format!(
            "good prefix layers have sizes {:?}, expected {:?}",
            good_prefix_layers.size_vector(),
            good_expect
        )));
    }

    let good_trace = layer_trace(&good_prefix_layers, &extension);
    let bad_trace = layer_trace(&bad_prefix_layers, &extension);
    let good_final = good_trace.last().expect("non-empty extension");
    let bad_final = bad_trace.last().expect("non-empty extension");
    if !layers_equal_up_to_renaming(good_final, &good_prefix_layers)
        || !layers_equal_up_to_renaming(bad_final, &bad_prefix_layers)
    {
        return Err(Error::ConstructionFailed(
            "extension does not reproduce the starting layers up to renaming".into(),
        ));
    }

    let pair = SequencePair::validated(
        "partition-equitable",
        k,
        json!({ "extension_len": extension.len() }),
        good,
        bad,
        1,
        Predicted::default(),
    )?;
    Ok(PartitionEquitablePair {
        pair,
        extension,
        good_prefix_layers,
        bad_prefix_layers,
        good_trace,
        bad_trace,
    })
}
