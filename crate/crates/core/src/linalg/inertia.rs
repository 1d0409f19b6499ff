use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use super::RationalMatrix;
use crate::error::{Error, Result};

/// Inertia `(s⁻, s⁰, s⁺)` of a symmetric form, in that order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 3]", from = "[usize; 3]")]
pub struct SignatureTriple {
    pub s_minus: usize,
    pub s_zero: usize,
    pub s_plus: usize,
}

impl SignatureTriple {
    pub const fn new(s_minus: usize, s_zero: usize, s_plus: usize) -> Self {
        Self {
            s_minus,
            s_zero,
            s_plus,
        }
    }

    pub fn total(&self) -> usize {
        self.s_minus + self.s_zero + self.s_plus
    }

    /// `self - other` componentwise, if non-negative.
    pub fn checked_sub(&self, other: &SignatureTriple) -> Option<SignatureTriple> {
        Some(SignatureTriple::new(
            self.s_minus.checked_sub(other.s_minus)?,
            self.s_zero.checked_sub(other.s_zero)?,
            self.s_plus.checked_sub(other.s_plus)?,
        ))
    }
}

impl Add for SignatureTriple {
    type Output = SignatureTriple;
    fn add(self, o: SignatureTriple) -> SignatureTriple {
        SignatureTriple::new(
            self.s_minus + o.s_minus,
            self.s_zero + o.s_zero,
            self.s_plus + o.s_plus,
        )
    }
}

impl From<[usize; 3]> for SignatureTriple {
    fn from(a: [usize; 3]) -> Self {
        SignatureTriple::new(a[0], a[1], a[2])
    }
}

impl From<SignatureTriple> for [usize; 3] {
    fn from(s: SignatureTriple) -> Self {
        [s.s_minus, s.s_zero, s.s_plus]
    }
}

impl fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s_minus, self.s_zero, self.s_plus)
    }
}

impl FromStr for SignatureTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("signature needs three parts: `{s}`")));
        }
        let mut v = [0usize; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad signature component `{p}`")))?;
        }
        Ok(v.into())
    }
}

/// Inertia of a symmetric rational matrix by congruence diagonalization.
///
/// The lowest-index nonzero diagonal entry is used as pivot and eliminated
/// from its row and column. When the remaining diagonal vanishes but some
/// `m_ij ≠ 0`, row/column `j` is added to row/column `i`, which puts
/// `2 m_ij` on the diagonal.
pub fn inertia(m: &RationalMatrix) -> Result<SignatureTriple> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = SignatureTriple::default();

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[(i, i)].is_zero()) {
            let p = active.remove(pos);
            let d = a[(p, p)].clone();
            if d.is_positive() {
                sig.s_plus += 1;
            } else {
                sig.s_minus += 1;
            }
            let col: Vec<_> = active.iter().map(|&j| a[(j, p)].clone()).collect();
            for (x, &j) in active.iter().enumerate() {
                if col[x].is_zero() {
                    continue;
                }
                let f = &col[x] / &d;
                for (y, &k) in active.iter().enumerate() {
                    if col[y].is_zero() {
                        continue;
                    }
                    let v = &a[(j, k)] - &f * &col[y];
                    a[(j, k)] = v;
                }
            }
            continue;
        }
        let off = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..]
                .iter()
                .find(|&&j| !a[(i, j)].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = off else {
            sig.s_zero += active.len();
            break;
        };
        // row_i += row_j, then col_i += col_j
        for &k in &active {
            let v = &a[(i, k)] + &a[(j, k)];
            a[(i, k)] = v;
        }
        for &k in &active {
            let v = &a[(k, i)] + &a[(k, j)];
            a[(k, i)] = v;
        }
    }
    Ok(sig)
}
