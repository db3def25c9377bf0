pub mod audit;
pub mod curves;
pub mod fixpoint;
pub mod mc_check;
pub mod pairs;
pub mod table1;

use anyhow::Result;
use num::One;
use pagesmooth::audit::{BoundKind, BoundSpec};
use pagesmooth::rational::{frac, harmonic, rat, Ratio};

/// The declared smoothness bound for a policy tag at (k, i, delta), when
/// the results table has one.
pub fn bound_for(tag: &str, k: usize, i: usize, delta: usize) -> Result<Option<BoundSpec>> {
    let d = rat(delta as i64);
    let bound = match tag {
        "lru" | "random" => Some(BoundSpec {
            alpha: Ratio::one(),
            beta: &d * rat(k as i64 + 1),
            kind: BoundKind::Upper,
            formula: "(1, delta*(k+1))".into(),
        }),
        "fwf" => Some(BoundSpec {
            alpha: Ratio::one(),
            beta: &d * rat(2 * k as i64),
            kind: BoundKind::Upper,
            formula: "(1, 2*delta*k)".into(),
        }),
        "belady" | "opt" => Some(BoundSpec {
            alpha: Ratio::one(),
            beta: &d * rat(2),
            kind: BoundKind::Upper,
            formula: "(1, 2*delta)".into(),
        }),
        "eoa" => Some(BoundSpec {
            alpha: Ratio::one(),
            beta: &d * (Ratio::one() + frac(k as i64, 2 * k as i64 - 1)),
            kind: BoundKind::Upper,
            formula: "(1, delta*(1+k/(2k-1)))".into(),
        }),
        "smoothed-lru" => Some(BoundSpec {
            alpha: Ratio::one(),
            beta: &d * (frac((k + i) as i64, (2 * i + 1) as i64) + Ratio::one()),
            kind: BoundKind::Upper,
            formula: "(1, delta*((k+i)/(2i+1)+1))".into(),
        }),
        "lru-random" if k == 2 => Some(BoundSpec {
            alpha: Ratio::one(),
            beta: &d * frac(17, 6),
            kind: BoundKind::Upper,
            formula: "(1, 17*delta/6)".into(),
        }),
        "fifo" => Some(BoundSpec {
            alpha: rat(k as i64),
            beta: &d * rat(2 * k as i64),
            kind: BoundKind::Upper,
            formula: "(k, 2*delta*k)".into(),
        }),
        "mark" => Some(BoundSpec {
            alpha: rat(2) * harmonic(k) - Ratio::one(),
            beta: &d * (rat(4) * harmonic(k) - rat(2)),
            kind: BoundKind::Upper,
            formula: "(2H_k-1, delta*(4H_k-2))".into(),
        }),
        _ => None,
    };
    Ok(bound)
}
