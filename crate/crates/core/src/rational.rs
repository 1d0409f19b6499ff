//! Arbitrary-precision rationals and the textual format used in every file
//! and report (`"p"` or `"p/q"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when the parts overflow f64.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact value of a finite double.
pub fn from_f64_exact(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn sign(x: &Q) -> Ordering {
    x.cmp(&Q::zero())
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// taken from the continued-fraction convergents (plus the final
/// semiconvergent when it is closer).
pub fn approximate(x: f64, max_den: u64) -> Q {
    assert!(x.is_finite(), "cannot rationalize {x}");
    let negative = x < 0.0;
    let mut rest = x.abs();
    let max_den = max_den.max(1) as i128;

    // h/k convergents
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut best: (i128, i128) = (rest.round() as i128, 1);
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den {
            // semiconvergent with the largest admissible partial quotient
            let m = (max_den - k0) / k1.max(1);
            if m > 0 {
                let hs = m * h1 + h0;
                let ks = m * k1 + k0;
                let err_s = (hs as f64 / ks as f64 - x.abs()).abs();
                let err_b = (best.0 as f64 / best.1 as f64 - x.abs()).abs();
                if err_s < err_b {
                    best = (hs, ks);
                }
            }
            break;
        }
        best = (h2, k2);
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = rest - a as f64;
        if frac < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    let value = Q::new(BigInt::from(best.0), BigInt::from(best.1));
    if negative {
        -value
    } else {
        value
    }
}

/// Exact square root of a non-negative rational, when it exists.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Q::zero());
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Rational r with r >= sqrt(x) (x >= 0), reasonably tight.
pub fn sqrt_upper(x: &Q) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let mut r = approximate(to_f64(x).sqrt(), 1 << 20);
    if r.is_zero() {
        r = Q::one();
    }
    while &(&r * &r) < x {
        r = &r * qr(11, 10) + qr(1, 1 << 20);
    }
    r
}

/// Positive rational r with r <= sqrt(x) (x > 0).
pub fn sqrt_lower(x: &Q) -> Q {
    let inv = sqrt_upper(&x.recip());
    inv.recip()
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}
