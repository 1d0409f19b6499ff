//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::surd::Ring;
use crate::rational::{fmt_q, to_f64, Q};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(coeff: Q, exps: Exponents) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(coeff, exps);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Q::one(), e)
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn add_term(&mut self, coeff: Q, exps: Exponents) {
        assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Q::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(c.clone(), e.clone());
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(-c, e.clone());
        }
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(c1 * c2, e);
            }
        }
        p
    }

    pub fn scale(&self, s: &Q) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(c * s, e.clone());
        }
        p
    }

    /// Total degrees occurring in the polynomial.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.degree_in(var) > 0
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            p.add_term(c * Q::from_integer(e[var].into()), e2);
        }
        p
    }

    pub fn eval<R: Ring>(&self, x: &[R]) -> R {
        assert_eq!(x.len(), self.nvars);
        let mut acc = R::zero_value();
        for (e, c) in &self.terms {
            let mut t = R::from_q(c);
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(xi);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                to_f64(c)
                    * x.iter()
                        .zip(e)
                        .map(|(xi, &k)| xi.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Sum of absolute values of the terms at `x`.
    pub fn magnitude_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                (to_f64(c)
                    * x.iter()
                        .zip(e)
                        .map(|(xi, &k)| xi.powi(k as i32))
                        .product::<f64>())
                .abs()
            })
            .sum()
    }

    /// Coefficients `c_0, c_1, …` of the polynomial viewed in `var` with all
    /// other variables fixed at `x`.
    pub fn univariate(&self, var: usize, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, (xi, &k)) in x.iter().zip(e).enumerate() {
                if i != var {
                    for _ in 0..k {
                        t *= xi;
                    }
                }
            }
            out[e[var] as usize] += t;
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        // highest-degree, then lexicographically largest, first
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{k}", names[v])
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&fmt_q(&abs));
            } else {
                if !abs.is_one() {
                    s.push_str(&fmt_q(&abs));
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display(&names))
    }
}

/// Parses expressions like `a3^2 - a2*a4 - 2*a1*a5` over variables `a1..an`
/// (1-based). Only sums of signed monomials are accepted.
pub fn parse_poly(nvars: usize, s: &str) -> crate::error::Result<Poly> {
    use crate::error::Error;
    let mut p = Poly::zero(nvars);
    let normalized = s.replace('-', "+-");
    for raw in normalized.split('+') {
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b.trim()),
            None => (false, t),
        };
        let mut coeff = Q::one();
        let mut e = vec![0u32; nvars];
        for f in body.split('*').map(str::trim) {
            if let Some(v) = f.strip_prefix('a') {
                let (idx, pow) = match v.split_once('^') {
                    Some((i, k)) => (i, k.parse::<u32>().map_err(|_| Error::Parse(f.into()))?),
                    None => (v, 1),
                };
                let idx: usize = idx.parse().map_err(|_| Error::Parse(f.into()))?;
                if idx == 0 || idx > nvars {
                    return Err(Error::Parse(format!("variable `{f}` out of range")));
                }
                e[idx - 1] += pow;
            } else {
                coeff *= crate::rational::parse_q(f)?;
            }
        }
        p.add_term(if neg { -coeff } else { coeff }, e);
    }
    Ok(p)
}
