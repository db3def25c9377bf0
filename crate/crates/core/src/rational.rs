//! Exact rational arithmetic helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used for every exact quantity in the crate.
pub type Ratio = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

/// Rational `num / den`.
pub fn frac(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// k-th harmonic number `H_k = sum_{i=1..k} 1/i`, with `H_0 = 0`.
pub fn harmonic(k: usize) -> Ratio {
    let mut h = Ratio::zero();
    for i in 1..=k {
        h += frac(1, i as i64);
    }
    h
}

/// `base^exp` for a rational base and non-negative integer exponent.
pub fn pow(base: &Ratio, exp: usize) -> Ratio {
    let mut acc = Ratio::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Decimal rendering with a fixed number of fractional digits (round to nearest).
pub fn to_decimal_string(r: &Ratio, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Ratio::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let abs = rounded.abs();
    let int_part = &abs / &scale;
    let frac_part = &abs % &scale;
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{frac:0>width$}",
            frac = frac_part.to_string(),
            width = digits as usize
        )
    }
}

/// Fraction rendering `p/q` (or just `p` for integers).
pub fn to_fraction_string(r: &Ratio) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents/semiconvergents).
pub fn best_approx(x: &Ratio, max_den: u64) -> Ratio {
    let max_den = BigInt::from(max_den);
    if x.denom() <= &max_den {
        return x.clone();
    }
    // Stern-Brocot style walk over continued-fraction terms.
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
    let (mut p1, mut q1) = (x.floor().to_integer(), BigInt::from(1));
    let mut frac = x - Ratio::from_integer(p1.clone());
    while !frac.is_zero() {
        let inv = frac.recip();
        let a = inv.floor().to_integer();
        frac = inv - Ratio::from_integer(a.clone());
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > max_den {
            // Best semiconvergent still within the bound.
            let t = (&max_den - &q0) / &q1;
            let ps = &t * &p1 + &p0;
            let qs = &t * &q1 + &q0;
            let cand1 = Ratio::new(ps, qs.max(BigInt::from(1)));
            let cand2 = Ratio::new(p1.clone(), q1.clone());
            return if (x - &cand1).abs() < (x - &cand2).abs() {
                cand1
            } else {
                cand2
            };
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    Ratio::new(p1, q1)
}

/// Lossy conversion to f64 for display and Monte Carlo comparisons.
pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
