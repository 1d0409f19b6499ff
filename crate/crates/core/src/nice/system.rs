//! Nice bases and the polynomial system of diagonal Ricci values.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::{Exponents, Poly};
use super::surd::{determinant, Ring, Surd};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{unit, RationalMatrix, Subspace};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NiceViolation {
    /// `[X_i, X_j]` has several nonzero components (1-based indices).
    MultipleTargets { i: usize, j: usize, components: Vec<usize> },
    /// `[X_i, X_j]` and `[X_r, X_s]` both hit `X_k` and share an index.
    SharedIndex { k: usize, first: (usize, usize), second: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceBasisReport {
    pub is_nice: bool,
    pub violation: Option<NiceViolation>,
}

/// Checks both nice-basis conditions for the given basis (columns).
pub fn is_nice_basis(alg: &LieAlgebra, basis: &RationalMatrix) -> Result<NiceBasisReport> {
    let b = alg.change_basis(basis)?;
    Ok(nice_report(&b))
}

fn nice_report(b: &LieAlgebra) -> NiceBasisReport {
    let n = b.dim();
    let mut hits: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let v = b.basis_bracket(i, j);
            let comps: Vec<usize> = (0..n).filter(|&k| !v[k].is_zero()).collect();
            match comps.len() {
                0 => {}
                1 => hits[comps[0]].push((i, j)),
                _ => {
                    return NiceBasisReport {
                        is_nice: false,
                        violation: Some(NiceViolation::MultipleTargets {
                            i: i + 1,
                            j: j + 1,
                            components: comps.iter().map(|k| k + 1).collect(),
                        }),
                    }
                }
            }
        }
    }
    for (k, pairs) in hits.iter().enumerate() {
        for (x, &(i, j)) in pairs.iter().enumerate() {
            for &(r, s) in &pairs[x + 1..] {
                if i == r || i == s || j == r || j == s {
                    return NiceBasisReport {
                        is_nice: false,
                        violation: Some(NiceViolation::SharedIndex {
                            k: k + 1,
                            first: (i + 1, j + 1),
                            second: (r + 1, s + 1),
                        }),
                    };
                }
            }
        }
    }
    NiceBasisReport {
        is_nice: true,
        violation: None,
    }
}

/// Whether the centre must lie inside the derived ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemMode {
    Strict,
    /// Central basis vectors outside `[g,g]` are allowed at positions
    /// `d..d+(k−ℓ)`; they carry a zero Ricci value.
    Relaxed,
}

/// `2·ric(X_m, X_m) = F_j / monomial` for a metric diagonal in a nice basis,
/// with variables `a_i = ⟨X_i, X_i⟩` indexed by basis position.
#[derive(Clone, Debug)]
pub struct PolynomialSystem {
    pub basis: RationalMatrix,
    pub names: Vec<String>,
    /// Positions `m = ℓ, …, d−1` whose Ricci values are tracked.
    pub rows: Vec<usize>,
    pub polys: Vec<Poly>,
    pub denominators: Vec<Exponents>,
    /// `2·ric(X_m,X_m)` as a Laurent polynomial, term by term.
    pub laurent: Vec<Vec<(Vec<i32>, Q)>>,
    pub ell: usize,
    pub d: usize,
    /// Number of central basis vectors outside `[g,g]`.
    pub p: usize,
}

impl PolynomialSystem {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Gram matrix of the diagonal metric in the standard basis.
    pub fn metric_for(&self, x: &[Q]) -> Result<crate::curvature::Metric> {
        crate::curvature::Metric::in_basis(&RationalMatrix::from_diagonal(x), &self.basis)
    }

    pub fn eval(&self, x: &[Q]) -> Vec<Q> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }

    /// `(α, β)` with `2·ric(X_m, X_m) = α a_m² − β` for row `j`.
    pub fn two_sided_coefficients(&self, j: usize, x: &[Q]) -> (Q, Q) {
        let m = self.rows[j];
        let mut alpha = Q::zero();
        let mut beta = Q::zero();
        for (e, c) in &self.laurent[j] {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if v == m && k == 2 {
                    continue;
                }
                t *= pow_i(&x[v], k);
            }
            if e[m] == 2 {
                alpha += t;
            } else {
                beta -= t;
            }
        }
        (alpha, beta)
    }

    pub fn display_rows(&self) -> Vec<String> {
        self.polys.iter().map(|p| p.display(&self.names)).collect()
    }
}

fn pow_i(x: &Q, k: i32) -> Q {
    let base = if k < 0 { x.recip() } else { x.clone() };
    let mut t = Q::one();
    for _ in 0..k.unsigned_abs() {
        t *= &base;
    }
    t
}

/// Variable names: `a{k}` when the column is `e_k`, `b{i}` otherwise.
pub fn frame_names(basis: &RationalMatrix) -> Vec<String> {
    basis
        .columns()
        .iter()
        .enumerate()
        .map(|(i, c)| match unit_index(c) {
            Some(k) => format!("a{}", k + 1),
            None => format!("b{}", i + 1),
        })
        .collect()
}

fn unit_index(c: &[Q]) -> Option<usize> {
    let nz: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
    (nz.len() == 1 && c[nz[0]].is_one()).then(|| nz[0])
}

/// Position of each `e_k` in a permutation basis: `perm[pos] = k`.
pub fn permutation_of(basis: &RationalMatrix) -> Option<Vec<usize>> {
    let perm: Option<Vec<usize>> = basis.columns().iter().map(|c| unit_index(c)).collect();
    let perm = perm?;
    let mut seen = vec![false; perm.len()];
    for &k in &perm {
        if std::mem::replace(&mut seen[k], true) {
            return None;
        }
    }
    Some(perm)
}

/// Reorders a seed given in `e`-index order into basis positions.
pub fn seed_in_frame<T: Clone>(basis: &RationalMatrix, seed_e: &[T]) -> Result<Vec<T>> {
    let perm = permutation_of(basis)
        .ok_or_else(|| Error::Frame("seed needs a permutation basis".into()))?;
    if seed_e.len() != perm.len() {
        return Err(Error::DimensionMismatch {
            expected: perm.len(),
            got: seed_e.len(),
        });
    }
    Ok(perm.iter().map(|&k| seed_e[k].clone()).collect())
}

fn span_units(n: usize, idx: impl IntoIterator<Item = usize>) -> Subspace {
    Subspace::span(n, &idx.into_iter().map(|i| unit(n, i)).collect::<Vec<_>>())
}

pub fn diagonal_ricci_system(
    alg: &LieAlgebra,
    basis: &RationalMatrix,
    mode: SystemMode,
) -> Result<PolynomialSystem> {
    let b = alg.change_basis(basis)?;
    let report = nice_report(&b);
    if let Some(v) = report.violation {
        return Err(Error::NotNice(serde_json::to_string(&v)?));
    }
    let n = b.dim();
    let z = b.center();
    let der = b.derived_ideal();
    let zd = z.intersect(&der);
    let (ell, d, k) = (zd.dim(), der.dim(), z.dim());
    if mode == SystemMode::Strict && !z.is_subspace_of(&der) {
        return Err(Error::Frame("centre is not contained in the derived ideal".into()));
    }
    if zd != span_units(n, 0..ell) {
        return Err(Error::Frame(format!(
            "the first {ell} basis vectors must span Z ∩ [g,g]"
        )));
    }
    if der != span_units(n, 0..d) {
        return Err(Error::Frame(format!(
            "the first {d} basis vectors must span [g,g]"
        )));
    }
    let p = k - ell;
    if z != span_units(n, (0..ell).chain(d..d + p)) {
        return Err(Error::Frame(format!(
            "positions {}..{} must span the rest of the centre",
            d + 1,
            d + p
        )));
    }

    let mut rows = Vec::new();
    let mut polys = Vec::new();
    let mut denominators = Vec::new();
    let mut laurent = Vec::new();
    for m in ell..d {
        let mut terms: BTreeMap<Vec<i32>, Q> = BTreeMap::new();
        let mut add = |e: Vec<i32>, c: Q| {
            *terms.entry(e).or_insert_with(Q::zero) += c;
        };
        for i in 0..n {
            for j in i + 1..n {
                let c = &b.basis_bracket(i, j)[m];
                if !c.is_zero() {
                    let mut e = vec![0i32; n];
                    e[m] += 2;
                    e[i] -= 1;
                    e[j] -= 1;
                    add(e, c * c);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let c = &b.basis_bracket(i, m)[j];
                if !c.is_zero() {
                    let mut e = vec![0i32; n];
                    e[j] += 1;
                    e[i] -= 1;
                    add(e, -(c * c));
                }
            }
        }
        let terms: Vec<(Vec<i32>, Q)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let den: Exponents = (0..n)
            .map(|v| terms.iter().map(|(e, _)| (-e[v]).max(0)).max().unwrap_or(0) as u32)
            .collect();
        let mut poly = Poly::zero(n);
        for (e, c) in &terms {
            poly.add_term(
                c.clone(),
                e.iter().zip(&den).map(|(a, b)| (a + *b as i32) as u32).collect(),
            );
        }
        rows.push(m);
        polys.push(poly);
        denominators.push(den);
        laurent.push(terms);
    }
    Ok(PolynomialSystem {
        basis: basis.clone(),
        names: frame_names(basis),
        rows,
        polys,
        denominators,
        laurent,
        ell,
        d,
        p,
    })
}

/// Reorders the standard basis as (Z∩D, D∖Z, Z∖D, rest) when it is nice and
/// both `Z` and `[g,g]` are spanned by standard basis vectors.
pub fn standard_nice_frame(alg: &LieAlgebra) -> Option<RationalMatrix> {
    let n = alg.dim();
    if !nice_report(alg).is_nice {
        return None;
    }
    let z = alg.center();
    let der = alg.derived_ideal();
    let in_z: Vec<bool> = (0..n).map(|i| z.contains(&unit(n, i))).collect();
    let in_d: Vec<bool> = (0..n).map(|i| der.contains(&unit(n, i))).collect();
    if span_units(n, (0..n).filter(|&i| in_z[i])) != z || span_units(n, (0..n).filter(|&i| in_d[i])) != der {
        return None;
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| in_z[i] && in_d[i]).collect();
    order.extend((0..n).filter(|&i| !in_z[i] && in_d[i]));
    order.extend((0..n).filter(|&i| in_z[i] && !in_d[i]));
    order.extend((0..n).filter(|&i| !in_z[i] && !in_d[i]));
    let cols: Vec<_> = order.iter().map(|&i| unit(n, i)).collect();
    RationalMatrix::from_columns(n, &cols).ok()
}

#[derive(Clone, Debug, Serialize)]
pub struct NiceAlgebraReport {
    /// `F_j(α)` for each row, as printed values.
    pub residuals: Vec<String>,
    pub all_zero: bool,
    pub jacobian_det: String,
    pub jacobian_nonsingular: bool,
}

impl NiceAlgebraReport {
    pub fn certifies(&self) -> bool {
        self.all_zero && self.jacobian_nonsingular
    }
}

/// Checks `F(α) = 0` and `det DF(α) ≠ 0`, the Jacobian taken in the row
/// variables only. The seed is given by basis position.
pub fn check_nice_algebra(sys: &PolynomialSystem, seed: &[Surd]) -> Result<NiceAlgebraReport> {
    if seed.len() != sys.nvars() {
        return Err(Error::DimensionMismatch {
            expected: sys.nvars(),
            got: seed.len(),
        });
    }
    for (i, s) in seed.iter().enumerate() {
        if s.sign() != std::cmp::Ordering::Greater {
            return Err(Error::NonPositiveSeed(i + 1));
        }
    }
    let values: Vec<Surd> = sys.polys.iter().map(|p| p.eval(seed)).collect();
    let jac: Vec<Vec<Surd>> = sys
        .polys
        .iter()
        .map(|p| sys.rows.iter().map(|&v| p.derivative(v).eval(seed)).collect())
        .collect();
    let det = determinant(&jac);
    Ok(NiceAlgebraReport {
        residuals: values.iter().map(|v| v.to_string()).collect(),
        all_zero: values.iter().all(Ring::vanishes),
        jacobian_det: det.to_string(),
        jacobian_nonsingular: !det.vanishes(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Bracket;
    use crate::nice::poly::parse_poly;
    use crate::rational::q;

    fn filiform(n: usize) -> LieAlgebra {
        let b: Vec<Bracket> = (1..n - 1).map(|i| Bracket::new(0, i, vec![(i + 1, q(1))])).collect();
        LieAlgebra::new(n, &b).unwrap()
    }

    fn perm(n: usize, order: &[usize]) -> RationalMatrix {
        RationalMatrix::from_columns(n, &order.iter().map(|&i| unit(n, i - 1)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn heisenberg_is_nice_with_empty_system() {
        let h = LieAlgebra::new(3, &[Bracket::new(0, 1, vec![(2, q(1))])]).unwrap();
        assert!(is_nice_basis(&h, &RationalMatrix::identity(3)).unwrap().is_nice);
        let sys = diagonal_ricci_system(&h, &perm(3, &[3, 1, 2]), SystemMode::Strict).unwrap();
        assert!(sys.is_empty());
    }

    #[test]
    fn shared_index_witness() {
        // [e1,e2]=e3, [e1,e3]=e4 fine; add [e1,e4]=e3-like collision: [e2,e3]=e4
        let a = LieAlgebra::new_unchecked(
            4,
            &[
                Bracket::new(0, 1, vec![(2, q(1))]),
                Bracket::new(0, 2, vec![(3, q(1))]),
                Bracket::new(1, 2, vec![(3, q(1))]),
            ],
        )
        .unwrap();
        let r = nice_report(&a);
        assert_eq!(
            r.violation,
            Some(NiceViolation::SharedIndex { k: 4, first: (1, 3), second: (2, 3) })
        );
    }

    #[test]
    fn filiform_system() {
        let m = filiform(6);
        let sys = diagonal_ricci_system(&m, &perm(6, &[6, 3, 4, 5, 1, 2]), SystemMode::Strict).unwrap();
        let expect = ["a3^2 - a2*a4", "a4^2 - a3*a5", "a5^2 - a4*a6"];
        for (p, e) in sys.polys.iter().zip(expect) {
            // variable a_k sits at the position of e_k in the basis
            let pos = [4, 5, 1, 2, 3, 0];
            let mut remapped = Poly::zero(6);
            for (ex, c) in parse_poly(6, e).unwrap().terms() {
                let mut ne = vec![0; 6];
                for (k, &pw) in ex.iter().enumerate() {
                    ne[pos[k]] += pw;
                }
                remapped.add_term(c.clone(), ne);
            }
            assert_eq!(p, &remapped);
        }
        let seed = vec![Surd::rational(q(1)); 6];
        assert!(check_nice_algebra(&sys, &seed).unwrap().certifies());
        let mut bad = seed.clone();
        bad[2] = Surd::rational(q(0));
        assert!(matches!(check_nice_algebra(&sys, &bad), Err(Error::NonPositiveSeed(3))));
    }

    #[test]
    fn ordering_is_enforced() {
        let m = filiform(5);
        assert!(matches!(
            diagonal_ricci_system(&m, &RationalMatrix::identity(5), SystemMode::Strict),
            Err(Error::Frame(_))
        ));
        let frame = standard_nice_frame(&m).unwrap();
        assert_eq!(permutation_of(&frame).unwrap(), vec![4, 2, 3, 0, 1]);
    }
}
