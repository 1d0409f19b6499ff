//! Elements `a + b√r` of a real quadratic field, enough to evaluate
//! polynomials exactly at seeds such as `(2, √2, 2, √2, 1, 1)`.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, sqrt_exact, to_f64, Q};

/// Exact arithmetic needed by polynomial evaluation and small determinants.
pub trait Ring: Clone {
    fn zero_value() -> Self;
    fn from_q(x: &Q) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn vanishes(&self) -> bool;
}

impl Ring for Q {
    fn zero_value() -> Self {
        Q::zero()
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// `a + b√r`, with `r` a positive non-square rational whenever `b ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Q,
    pub b: Q,
    pub r: Q,
}

impl Surd {
    pub fn rational(a: Q) -> Self {
        Self {
            a,
            b: Q::zero(),
            r: Q::zero(),
        }
    }

    /// `c·√r`, collapsing to a rational when `r` is a square.
    pub fn sqrt_times(c: Q, r: Q) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Parse(format!("sqrt of non-positive {}", fmt_q(&r))));
        }
        Ok(match sqrt_exact(&r) {
            Some(s) => Self::rational(c * s),
            None => Self { a: Q::zero(), b: c, r },
        })
    }

    /// Accepts `p/q`, `sqrt(r)` or `c*sqrt(r)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.find("sqrt(") {
            None => Ok(Self::rational(parse_q(t)?)),
            Some(pos) => {
                let inner = t[pos + 5..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unterminated sqrt in `{t}`")))?;
                let coeff = t[..pos].trim().trim_end_matches('*').trim();
                let c = if coeff.is_empty() { Q::one() } else { parse_q(coeff)? };
                Self::sqrt_times(c, parse_q(inner)?)
            }
        }
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.r = Q::zero();
        }
        self
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_q(&self) -> Option<Q> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.r).sqrt()
    }

    fn radicand(&self, o: &Self) -> Q {
        match (self.b.is_zero(), o.b.is_zero()) {
            (true, _) => o.r.clone(),
            (false, true) => self.r.clone(),
            (false, false) => {
                assert_eq!(self.r, o.r, "mixed quadratic fields");
                self.r.clone()
            }
        }
    }

    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Q::zero());
        let sb = self.b.cmp(&Q::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a² with b²r
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.r)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

impl Ring for Surd {
    fn zero_value() -> Self {
        Self::rational(Q::zero())
    }
    fn from_q(x: &Q) -> Self {
        Self::rational(x.clone())
    }
    fn add(&self, o: &Self) -> Self {
        let r = self.radicand(o);
        Self {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            r,
        }
        .normalized()
    }
    fn sub(&self, o: &Self) -> Self {
        let r = self.radicand(o);
        Self {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            r,
        }
        .normalized()
    }
    fn mul(&self, o: &Self) -> Self {
        let r = self.radicand(o);
        Self {
            a: &self.a * &o.a + &self.b * &o.b * &r,
            b: &self.a * &o.b + &self.b * &o.a,
            r,
        }
        .normalized()
    }
    fn vanishes(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_q(&self.a));
        }
        let root = if self.b.is_one() {
            format!("sqrt({})", fmt_q(&self.r))
        } else {
            format!("{}*sqrt({})", fmt_q(&self.b), fmt_q(&self.r))
        };
        if self.a.is_zero() {
            write!(f, "{root}")
        } else {
            write!(f, "{}+{root}", fmt_q(&self.a))
        }
    }
}

/// Determinant by cofactor expansion; only ring operations are used.
pub fn determinant<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    match n {
        0 => R::from_q(&Q::one()),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = R::zero_value();
            for c in 0..n {
                if m[0][c].vanishes() {
                    continue;
                }
                let minor: Vec<Vec<R>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][c].mul(&determinant(&minor));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn parse_forms() {
        let s = Surd::parse("sqrt(2)").unwrap();
        assert_eq!((s.a.clone(), s.b.clone(), s.r.clone()), (q(0), q(1), q(2)));
        assert_eq!(Surd::parse("3*sqrt(4)").unwrap(), Surd::rational(q(6)));
        assert_eq!(Surd::parse("1/2").unwrap().to_q(), Some(crate::rational::qr(1, 2)));
        assert!(Surd::parse("sqrt(-1)").is_err());
        assert_eq!(s.to_string(), "sqrt(2)");
    }

    #[test]
    fn field_arithmetic_and_sign() {
        let r2 = Surd::parse("sqrt(2)").unwrap();
        assert_eq!(r2.mul(&r2), Surd::rational(q(2)));
        // 1 - √2 < 0 and 3/2 - √2 > 0
        let one = Surd::rational(q(1));
        assert_eq!(one.sub(&r2).sign(), Ordering::Less);
        let x = Surd::rational(crate::rational::qr(3, 2)).sub(&r2);
        assert_eq!(x.sign(), Ordering::Greater);
        assert!((x.to_f64() - (1.5 - 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn cofactor_determinant() {
        let m = vec![
            vec![q(2), q(0), q(1)],
            vec![q(1), q(3), q(2)],
            vec![q(1), q(1), q(1)],
        ];
        assert_eq!(determinant(&m), q(0));
        let r = crate::linalg::RationalMatrix::from_rows(vec![
            vec![q(2), q(1)],
            vec![q(5), q(3)],
        ])
        .unwrap();
        assert_eq!(determinant(&r.to_rows()), r.determinant().unwrap());
    }
}
