//! The Mark shifted-phase lower-bound family.
//!
//! The good and bad sequences share one request stream; the bad sequence
//! prepends a single extra page, which shifts every phase boundary of the
//! bad partition l-1 positions to the left of the good one from the third
//! phase on. Each steady bad phase then serves l new pages followed by k-l
//! old ones (expected Mark misses `l(1 + H_k - H_l)`), while each steady
//! good phase serves one new page, k-l+1 old ones, and l-2 new ones
//! (expected `l - 1 + H_k - H_{l-1}`).

use serde_json::json;

use crate::adversaries::{Predicted, SequencePair};
use crate::engines::mark::{mark_bad_phase_cost, mark_good_phase_cost};
use crate::error::Error;
use crate::page::{PageId, RequestSequence};
use crate::phase::phase_partition;
use crate::Result;

/// Generate the pair with `phases` steady phases (the bad partition has
/// `phases + 2` phases in total). Requires `2 <= l < k`: at `l = k` the
/// shifted partition cannot reach its steady shape by the third phase, the
/// all-new bad phase collides with the good phase's old-page slot.
pub fn gen_mark_pair(k: usize, l: usize, phases: usize) -> Result<SequencePair> {
    if !(2..k).contains(&l) {
        return Err(Error::InvalidParameter(format!(
            "mark pair requires 2 <= l < k (got l = {l}, k = {k})"
        )));
    }
    if phases == 0 {
        return Err(Error::InvalidParameter("phases must be >= 1".into()));
    }

    // Page naming: x_0..x_k are 0..=k, y_1..y_k are k+1..=2k, later new
    // pages are allocated past 2k.
    let x = |i: usize| PageId(i as u64);
    let y = |i: usize| PageId((k + i) as u64);
    let mut next_fresh = 2 * k as u64 + 1;
    let mut fresh = || {
        let p = PageId(next_fresh);
        next_fresh += 1;
        p
    };

    // Shared stream; good = stream, bad = x_0 ∘ stream.
    let mut stream: RequestSequence = Vec::new();
    // Setup: x_1..x_k, x_1..x_{l-1}, y_1, x_1, y_2..y_{k-l}.
    stream.extend((1..=k).map(x));
    stream.extend((1..l).map(x));
    stream.push(y(1));
    stream.push(x(1));
    stream.extend((2..=k - l).map(y));

    // Steady phases: new pages then old pages, per bad-partition phase.
    // news[0] is recycled from two good-phases back; the rest are fresh.
    let mut news: Vec<PageId> = (k - l + 1..=k).map(y).collect();
    let mut olds: Vec<PageId> = (1..=k - l).map(y).collect();
    let mut next_first = x(1);
    for phase in 0..phases {
        stream.extend(news.iter().copied());
        stream.extend(olds.iter().copied());
        if phase + 1 == phases {
            break;
        }
        // Leftover of the enclosing good phase: its first new page plus the
        // olds; the first k-l become the next olds, the last one opens the
        // phase after next.
        let mut leftover = vec![*news.last().unwrap()];
        leftover.extend(olds.iter().copied());
        let coming_first = *leftover.last().unwrap();
        leftover.pop();
        olds = leftover;
        news = std::iter::once(next_first)
            .chain((1..l).map(|_| fresh()))
            .collect();
        next_first = coming_first;
    }

    let good = stream.clone();
    let mut bad = vec![x(0)];
    bad.extend(stream);

    // Structural self-check: from the third bad phase on, bad boundaries sit
    // exactly l-1 requests before good boundaries (in shared-stream
    // coordinates, where bad index = good index + 1).
    let good_part = phase_partition(&good, k);
    let bad_part = phase_partition(&bad, k);
    if bad_part.phase_count != phases + 2 {
        return Err(Error::ConstructionFailed(format!(
            "bad partition has {} phases, expected {}",
            bad_part.phase_count,
            phases + 2
        )));
    }
    for h in 2..bad_part.phase_count.min(good_part.phase_count) {
        let bad_start = bad_part.boundaries[h];
        let good_start = good_part.boundaries[h] + 1;
        if good_start != bad_start + (l - 1) {
            return Err(Error::ConstructionFailed(format!(
                "phase {h} boundaries not shifted by l-1: good {good_start}, bad {bad_start}"
            )));
        }
    }

    SequencePair::validated(
        "mark",
        k,
        json!({
            "l": l,
            "phases": phases,
            "steady_from_phase": 3,
            "bad_phase_cost": crate::corpus::RatioRepr::of(&mark_bad_phase_cost(k, l)),
            "good_phase_cost": crate::corpus::RatioRepr::of(&mark_good_phase_cost(k, l)),
        }),
        good,
        bad,
        1,
        Predicted::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::mark::expected_mark;
    use crate::page::CacheConfig;
    use crate::rational::Ratio;
    use num::Zero;

    fn phase_costs(s: &[PageId], k: usize) -> Vec<Ratio> {
        let cfg = CacheConfig::new(k).unwrap();
        let e = expected_mark(cfg, s).unwrap();
        let part = phase_partition(s, k);
        (0..part.phase_count)
            .map(|idx| {
                e.per_request[part.phase_range(idx, s.len())]
                    .iter()
                    .fold(Ratio::zero(), |a, b| a + b)
            })
            .collect()
    }

    #[test]
    fn rejects_out_of_range_l() {
        assert!(gen_mark_pair(4, 1, 3).is_err());
        assert!(gen_mark_pair(4, 4, 3).is_err());
        assert!(gen_mark_pair(4, 5, 3).is_err());
    }

    #[test]
    fn steady_phase_costs_match_closed_forms() {
        let (k, l, phases) = (4, 2, 5);
        let pair = gen_mark_pair(k, l, phases).unwrap();
        let bad_costs = phase_costs(&pair.bad, k);
        #[allow(clippy::needless_range_loop)] // h is the phase number
        for h in 2..2 + phases {
            assert_eq!(bad_costs[h], mark_bad_phase_cost(k, l), "bad phase {h}");
        }
        let good_costs = phase_costs(&pair.good, k);
        #[allow(clippy::needless_range_loop)] // h is the phase number
        for h in 2..1 + phases {
            assert_eq!(good_costs[h], mark_good_phase_cost(k, l), "good phase {h}");
        }
    }

    #[test]
    fn distance_is_one() {
        let pair = gen_mark_pair(5, 3, 4).unwrap();
        assert_eq!(pair.declared_distance, 1);
        assert_eq!(crate::edit::edit_distance(&pair.good, &pair.bad), 1);
    }
}
