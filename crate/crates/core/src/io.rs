//! JSON formats for algebras and metrics. Rationals are strings `"p/q"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::parse_basis;
use crate::curvature::Metric;
use crate::error::{Error, Result};
use crate::lie::{Bracket, LieAlgebra};
use crate::linalg::RationalMatrix;
use crate::rational::{fmt_q, parse_q, Q};

/// `{"i":1,"j":2,"rhs":{"3":"1"}}`: `[e_i, e_j] = Σ c_k e_k`, 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub rhs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
}

impl AlgebraFile {
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let mut out = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 {
                return Err(Error::Parse(format!("indices are 1-based: [{}, {}]", b.i, b.j)));
            }
            let mut rhs = Vec::new();
            for (k, c) in &b.rhs {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad component index `{k}`")))?;
                if k == 0 {
                    return Err(Error::Parse("component indices are 1-based".into()));
                }
                rhs.push((k - 1, parse_q(c)?));
            }
            out.push(Bracket::new(b.i - 1, b.j - 1, rhs));
        }
        LieAlgebra::new(self.dim, &out)
    }

    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let brackets = alg
            .brackets()
            .into_iter()
            .map(|b| BracketEntry {
                i: b.i + 1,
                j: b.j + 1,
                rhs: b
                    .rhs
                    .iter()
                    .map(|(k, c)| ((k + 1).to_string(), fmt_q(c)))
                    .collect(),
            })
            .collect();
        Self {
            dim: alg.dim(),
            brackets,
        }
    }
}

pub fn parse_algebra_json(s: &str) -> Result<LieAlgebra> {
    serde_json::from_str::<AlgebraFile>(s)?.to_algebra()
}

/// Either a diagonal or a full Gram matrix, optionally written in a basis
/// `f` given by column expressions such as `"e5+e3+e1"`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_change: Option<Vec<String>>,
}

impl MetricFile {
    /// The Gram matrix in the standard basis.
    pub fn to_metric(&self, n: usize) -> Result<Metric> {
        let gram_f = match (&self.diag, &self.gram) {
            (Some(d), None) => RationalMatrix::from_diagonal(&parse_row(d)?),
            (None, Some(g)) => RationalMatrix::from_rows(g.iter().map(|r| parse_row(r)).collect::<Result<_>>()?)?,
            _ => return Err(Error::Parse("metric needs exactly one of `diag` or `gram`".into())),
        };
        if gram_f.rows() != n || gram_f.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram_f.rows(),
            });
        }
        match &self.basis_change {
            Some(cols) => Metric::in_basis(&gram_f, &parse_basis(n, cols)?),
            None => Metric::new(gram_f),
        }
    }

    pub fn from_diag(x: &[Q]) -> Self {
        Self {
            diag: Some(x.iter().map(fmt_q).collect()),
            ..Self::default()
        }
    }

    pub fn from_gram(m: &RationalMatrix) -> Self {
        Self {
            gram: Some(matrix_strings(m)),
            ..Self::default()
        }
    }
}

fn parse_row(r: &[String]) -> Result<Vec<Q>> {
    r.iter().map(|s| parse_q(s)).collect()
}

/// `diag:1,1/2,3` shorthand, or a path to a metric JSON file.
pub fn parse_metric_arg(n: usize, arg: &str, basis_change: Option<Vec<String>>) -> Result<Metric> {
    let mut file: MetricFile = match arg.strip_prefix("diag:") {
        Some(list) => MetricFile {
            diag: Some(list.split(',').map(|s| s.trim().to_string()).collect()),
            ..MetricFile::default()
        },
        None => serde_json::from_str(&std::fs::read_to_string(arg)?)?,
    };
    if basis_change.is_some() {
        file.basis_change = basis_change;
    }
    file.to_metric(n)
}

pub fn matrix_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(fmt_q).collect())
        .collect()
}

/// Column `v` as `e`-expression, e.g. `e5+e3+e1` or `-1/2*e2`.
pub fn basis_vector_string(v: &[Q]) -> String {
    use num_traits::{One, Signed, Zero};
    let mut s = String::new();
    for (k, c) in v.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let a = c.abs();
        if !a.is_one() {
            s.push_str(&fmt_q(&a));
            s.push('*');
        }
        s.push_str(&format!("e{}", k + 1));
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

pub fn basis_strings(b: &RationalMatrix) -> Vec<String> {
    b.columns().iter().map(|c| basis_vector_string(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_basis_vector;
    use crate::rational::{q, qr};

    #[test]
    fn algebra_round_trip() {
        let s = r#"{"dim": 3, "brackets": [{"i":1,"j":2,"rhs":{"3":"1"}}]}"#;
        let a = parse_algebra_json(s).unwrap();
        let back = AlgebraFile::from_algebra(&a);
        assert_eq!(back.to_algebra().unwrap().brackets(), a.brackets());
        assert!(parse_algebra_json(r#"{"dim": 3, "brackets": [{"i":2,"j":1,"rhs":{"3":"1"}}]}"#).is_err());
        assert!(parse_algebra_json(r#"{"dim": 3, "brackets": [{"i":1,"j":2,"rhs":{"3":"x"}}]}"#).is_err());
    }

    #[test]
    fn metric_forms() {
        let g = parse_metric_arg(3, "diag:1,1/2,3", None).unwrap();
        assert_eq!(g.gram()[(1, 1)], qr(1, 2));
        assert!(matches!(
            parse_metric_arg(3, "diag:1,0,1", None),
            Err(Error::NotPositiveDefinite { index: 2, .. })
        ));
        let f = MetricFile {
            diag: Some(vec!["1".into(), "1".into()]),
            basis_change: Some(vec!["e1".into(), "e2+e1".into()]),
            ..MetricFile::default()
        };
        // f2 = e1 + e2 has unit length and is orthogonal to f1 = e1
        let m = f.to_metric(2).unwrap();
        let f2 = vec![q(1), q(1)];
        assert_eq!(m.inner(&f2, &f2), q(1));
        assert_eq!(m.inner(&f2, &[q(1), q(0)]), q(0));
    }

    #[test]
    fn basis_string_round_trip() {
        for s in ["e5+e3+e1", "-1/2*e2", "e6+3*e3"] {
            let v = parse_basis_vector(6, s).unwrap();
            assert_eq!(parse_basis_vector(6, &basis_vector_string(&v)).unwrap(), v);
        }
    }
}
