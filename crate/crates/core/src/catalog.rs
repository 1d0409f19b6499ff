//! Built-in algebras: dimensions 3 to 6, the filiform family `m0(n)` and a
//! seven-dimensional example, with nice frames, seeds, recipe bases and the
//! expected realizable signatures.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{AlgebraFile, BracketEntry};
use crate::lie::LieAlgebra;
use crate::linalg::{RationalMatrix, SignatureTriple, Vector};
use crate::nice::Surd;
use crate::rational::{parse_q, Q};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// A metric diagonal in a non-standard `basis`, with `a_i = ⟨f_i, f_i⟩`
/// set from `values` (default 1) and swept over the slots in `sweep`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub basis: Vec<String>,
    #[serde(default)]
    pub values: BTreeMap<String, String>,
    pub sweep: Vec<String>,
    #[serde(default)]
    pub outcomes: Vec<SignatureTriple>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedFrame {
    pub basis: Vec<String>,
    pub seed: Vec<String>,
}

/// One catalog record as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawEntry {
    pub id: String,
    #[serde(flatten)]
    pub algebra: AlgebraFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nice_basis: Option<Vec<String>>,
    /// Seed in `e`-index order; entries may be `sqrt(r)` forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nice_seed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_frame: Option<ReducedFrame>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub recipes: Vec<Recipe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_signatures: Option<Vec<SignatureTriple>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogFile {
    pub algebras: Vec<RawEntry>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub algebra: LieAlgebra,
    pub nice_basis: Option<RationalMatrix>,
    pub nice_seed: Option<Vec<Surd>>,
    pub reduced_frame: Option<(RationalMatrix, Vec<Q>)>,
    pub recipes: Vec<ParsedRecipe>,
    pub expected: Option<BTreeSet<SignatureTriple>>,
    pub raw: RawEntry,
}

#[derive(Clone, Debug)]
pub struct ParsedRecipe {
    pub basis: RationalMatrix,
    /// Positional defaults, 1 unless overridden.
    pub values: Vec<Q>,
    /// 0-based positions being swept.
    pub sweep: Vec<usize>,
    pub outcomes: Vec<SignatureTriple>,
}

/// Parses `e5+e3+e1` or `2*e3-1/2*e1` into a coordinate vector.
pub fn parse_basis_vector(n: usize, s: &str) -> Result<Vector> {
    let mut v = vec![Q::from_integer(0.into()); n];
    let norm = s.replace(' ', "").replace('-', "+-");
    for term in norm.split('+').filter(|t| !t.is_empty()) {
        let (neg, t) = match term.strip_prefix('-') {
            Some(t) => (true, t),
            None => (false, term),
        };
        let pos = t
            .find('e')
            .ok_or_else(|| Error::Parse(format!("expected e<k> in `{s}`")))?;
        let coeff_str = t[..pos].trim_end_matches('*');
        let c = if coeff_str.is_empty() { Q::from_integer(1.into()) } else { parse_q(coeff_str)? };
        let k: usize = t[pos + 1..]
            .parse()
            .map_err(|_| Error::Parse(format!("bad basis index in `{s}`")))?;
        if k == 0 || k > n {
            return Err(Error::Parse(format!("e{k} out of range in `{s}`")));
        }
        v[k - 1] += if neg { -c } else { c };
    }
    Ok(v)
}

pub fn parse_basis(n: usize, cols: &[String]) -> Result<RationalMatrix> {
    if cols.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: cols.len(),
        });
    }
    let vs = cols
        .iter()
        .map(|c| parse_basis_vector(n, c))
        .collect::<Result<Vec<_>>>()?;
    let m = RationalMatrix::from_columns(n, &vs)?;
    if m.rank() != n {
        return Err(Error::Singular);
    }
    Ok(m)
}

fn parse_slot(n: usize, s: &str) -> Result<usize> {
    let k: usize = s
        .strip_prefix('a')
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad parameter slot `{s}`")))?;
    if k == 0 || k > n {
        return Err(Error::Parse(format!("slot `{s}` out of range")));
    }
    Ok(k - 1)
}

impl CatalogEntry {
    pub fn from_raw(raw: RawEntry) -> Result<Self> {
        let algebra = raw.algebra.to_algebra()?;
        let n = algebra.dim();
        let nice_basis = raw.nice_basis.as_ref().map(|b| parse_basis(n, b)).transpose()?;
        let nice_seed = raw
            .nice_seed
            .as_ref()
            .map(|s| s.iter().map(|x| Surd::parse(x)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let reduced_frame = raw
            .reduced_frame
            .as_ref()
            .map(|f| -> Result<_> {
                let seed = f.seed.iter().map(|x| parse_q(x)).collect::<Result<Vec<_>>>()?;
                Ok((parse_basis(n, &f.basis)?, seed))
            })
            .transpose()?;
        let recipes = raw
            .recipes
            .iter()
            .map(|r| -> Result<ParsedRecipe> {
                let mut values = vec![Q::from_integer(1.into()); n];
                for (slot, v) in &r.values {
                    values[parse_slot(n, slot)?] = parse_q(v)?;
                }
                Ok(ParsedRecipe {
                    basis: parse_basis(n, &r.basis)?,
                    values,
                    sweep: r.sweep.iter().map(|s| parse_slot(n, s)).collect::<Result<_>>()?,
                    outcomes: r.outcomes.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            id: raw.id.clone(),
            algebra: algebra.with_labels((1..=n).map(|i| format!("e{i}")).collect()),
            nice_basis,
            nice_seed,
            reduced_frame,
            recipes,
            expected: raw.expected_signatures.as_ref().map(|v| v.iter().copied().collect()),
            raw,
        })
    }
}

/// A parsed catalog; the built-in one or one read from a user file.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn from_json(s: &str) -> Result<Self> {
        let file: CatalogFile = serde_json::from_str(s)?;
        let entries = file
            .algebras
            .into_iter()
            .map(|raw| {
                let id = raw.id.clone();
                CatalogEntry::from_raw(raw).map_err(|e| Error::Parse(format!("entry {id}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_json(CATALOG_JSON).expect("built-in catalog parses"))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn list(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    /// Looks up an id; `m0(n)` is generated on demand for `n ≥ 3`.
    pub fn lookup(&self, id: &str) -> Result<CatalogEntry> {
        if let Some(e) = self.entries.iter().find(|e| e.id == id) {
            return Ok(e.clone());
        }
        if let Some(n) = id
            .strip_prefix("m0(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|n| n.parse::<usize>().ok())
        {
            if n >= 3 {
                return filiform(n);
            }
        }
        Err(Error::UnknownId(id.to_string()))
    }

    /// Entries whose id matches a pattern with `*` wildcards, e.g. `L6_19(*)`.
    pub fn expand_family(&self, pattern: &str) -> Result<Vec<CatalogEntry>> {
        let out: Vec<CatalogEntry> = self
            .entries
            .iter()
            .filter(|e| glob_match(pattern, &e.id))
            .cloned()
            .collect();
        if out.is_empty() {
            return Err(Error::UnknownId(pattern.to_string()));
        }
        Ok(out)
    }
}

fn glob_match(pattern: &str, s: &str) -> bool {
    match pattern.split_once('*') {
        None => pattern == s,
        Some((head, rest)) => {
            let Some(tail) = s.strip_prefix(head) else {
                return false;
            };
            (0..=tail.len())
                .filter(|&i| tail.is_char_boundary(i))
                .any(|i| glob_match(rest, &tail[i..]))
        }
    }
}

/// `m0(n)`: `[e1, e_i] = e_{i+1}` for `2 ≤ i ≤ n−1`, with the nice frame
/// `(e_n, e_3, …, e_{n−1}, e_1, e_2)` and seed all ones.
pub fn filiform(n: usize) -> Result<CatalogEntry> {
    let brackets = (2..n)
        .map(|i| BracketEntry {
            i: 1,
            j: i,
            rhs: BTreeMap::from([((i + 1).to_string(), "1".to_string())]),
        })
        .collect();
    let mut basis = vec![format!("e{n}")];
    basis.extend((3..n).map(|i| format!("e{i}")));
    basis.extend(["e1".to_string(), "e2".to_string()]);
    CatalogEntry::from_raw(RawEntry {
        id: format!("m0({n})"),
        algebra: AlgebraFile { dim: n, brackets },
        nice_basis: Some(basis),
        nice_seed: Some(vec!["1".into(); n]),
        reduced_frame: None,
        recipes: Vec::new(),
        expected_signatures: None,
    })
}
