//! Left-invariant metric quantities: adjoints, J-operators, mean curvature,
//! Levi-Civita product and the Ricci form.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{inner, unit, RationalMatrix, Subspace, Vector};
use crate::rational::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    gram: RationalMatrix,
    gram_inv: RationalMatrix,
}

impl Metric {
    pub fn new(gram: RationalMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                got: gram.cols(),
            });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for (index, m) in gram.leading_minors().into_iter().enumerate() {
            if !m.is_positive() {
                return Err(Error::NotPositiveDefinite {
                    index: index + 1,
                    value: crate::rational::fmt_q(&m),
                });
            }
        }
        let gram_inv = gram.inverse()?;
        Ok(Self { gram, gram_inv })
    }

    pub fn diagonal(values: &[Q]) -> Result<Self> {
        Self::new(RationalMatrix::from_diagonal(values))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(RationalMatrix::identity(n)).expect("identity is positive definite")
    }

    /// Metric whose Gram matrix in the basis `f_j = Σ_i p_ij e_i` is `gram_f`.
    pub fn in_basis(gram_f: &RationalMatrix, p: &RationalMatrix) -> Result<Self> {
        let p_inv = p.inverse()?;
        Self::new(gram_f.congruence(&p_inv))
    }

    /// `G = PᵗP + I` with entries of `P` drawn from `-3..=3`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let p = RationalMatrix::from_fn(n, n, |_, _| q(rng.gen_range(-3..=3)));
        let g = &(&p.transpose() * &p) + &RationalMatrix::identity(n);
        Self::new(g).expect("PᵗP + I is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &RationalMatrix {
        &self.gram_inv
    }

    pub fn inner(&self, u: &[Q], v: &[Q]) -> Q {
        inner(&self.gram, u, v)
    }

    fn check(&self, alg: &LieAlgebra) -> Result<()> {
        if self.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: self.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RicciMethod {
    KoszulTrace,
    TraceFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciData {
    pub ric_form: RationalMatrix,
    pub metric: Metric,
    pub method: RicciMethod,
}

/// `ad_u* = G⁻¹ (ad_u)ᵗ G`.
pub fn adjoint_star(alg: &LieAlgebra, g: &Metric, u: &[Q]) -> Result<RationalMatrix> {
    g.check(alg)?;
    let ad = alg.ad(u)?;
    Ok(&(&g.gram_inv * &ad.transpose()) * &g.gram)
}

fn basis_adjoint_stars(alg: &LieAlgebra, g: &Metric) -> Vec<RationalMatrix> {
    (0..alg.dim())
        .map(|a| &(&g.gram_inv * &alg.ad_basis(a).transpose()) * &g.gram)
        .collect()
}

fn j_from_stars(stars: &[RationalMatrix], u: &[Q]) -> RationalMatrix {
    let n = u.len();
    let cols: Vec<Vector> = stars
        .iter()
        .map(|s| s.mul_vec(u).expect("shape"))
        .collect();
    RationalMatrix::from_columns(n, &cols).expect("shape")
}

/// Matrix of `v ↦ ad_v* u`.
pub fn j_operator(alg: &LieAlgebra, g: &Metric, u: &[Q]) -> Result<RationalMatrix> {
    g.check(alg)?;
    if u.len() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: u.len(),
        });
    }
    Ok(j_from_stars(&basis_adjoint_stars(alg, g), u))
}

/// `H` with `⟨H, u⟩ = tr ad_u`.
pub fn mean_curvature(alg: &LieAlgebra, g: &Metric) -> Result<Vector> {
    g.check(alg)?;
    let t: Vector = (0..alg.dim()).map(|a| alg.ad_basis(a).trace()).collect();
    g.gram.solve(&t)
}

/// `L_u v` from `2⟨L_u v, w⟩ = ⟨[u,v],w⟩ + ⟨[w,u],v⟩ + ⟨[w,v],u⟩`.
pub fn levi_civita(alg: &LieAlgebra, g: &Metric, u: &[Q], v: &[Q]) -> Result<Vector> {
    g.check(alg)?;
    let n = alg.dim();
    let uv = alg.bracket(u, v)?;
    let guv = g.gram.mul_vec(&uv)?;
    let half = Q::new(1.into(), 2.into());
    let rhs: Vector = (0..n)
        .map(|c| {
            let w = unit(n, c);
            let wu = alg.bracket(&w, u).expect("dims");
            let wv = alg.bracket(&w, v).expect("dims");
            (&guv[c] + g.inner(&wu, v) + g.inner(&wv, u)) * &half
        })
        .collect();
    g.gram_inv.mul_vec(&rhs)
}

fn levi_civita_basis(alg: &LieAlgebra, g: &Metric) -> Vec<RationalMatrix> {
    let n = alg.dim();
    (0..n)
        .map(|a| {
            let cols: Vec<Vector> = (0..n)
                .map(|b| levi_civita(alg, g, &unit(n, a), &unit(n, b)).expect("dims"))
                .collect();
            RationalMatrix::from_columns(n, &cols).expect("shape")
        })
        .collect()
}

fn combine(ops: &[RationalMatrix], coeffs: &[Q]) -> RationalMatrix {
    let n = ops[0].rows();
    let mut m = RationalMatrix::zeros(n, n);
    for (op, c) in ops.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        m = &m + &op.scale(c);
    }
    m
}

/// `ric(u,v) = tr(w ↦ K(u,w)v)` with `K(u,w) = L_{[u,w]} − [L_u, L_w]`.
pub fn ricci_via_curvature(alg: &LieAlgebra, g: &Metric) -> Result<RicciData> {
    g.check(alg)?;
    let n = alg.dim();
    let l = levi_civita_basis(alg, g);
    let mut ric = RationalMatrix::zeros(n, n);
    for a in 0..n {
        for c in 0..n {
            let l_bracket = combine(&l, alg.basis_bracket(a, c));
            // K(e_a, e_c) = L_{[e_a,e_c]} − L_a L_c + L_c L_a
            let k = &(&l_bracket - &(&l[a] * &l[c])) + &(&l[c] * &l[a]);
            for b in 0..n {
                let v = &ric[(a, b)] + &k[(c, b)];
                ric[(a, b)] = v;
            }
        }
    }
    Ok(RicciData {
        ric_form: ric,
        metric: g.clone(),
        method: RicciMethod::KoszulTrace,
    })
}

fn trace_of_product(a: &RationalMatrix, b: &RationalMatrix) -> Q {
    let n = a.rows();
    let mut t = Q::zero();
    for i in 0..n {
        for j in 0..n {
            if !a[(i, j)].is_zero() && !b[(j, i)].is_zero() {
                t += &a[(i, j)] * &b[(j, i)];
            }
        }
    }
    t
}

/// `ric(u,v) = −½tr(ad_u ad_v) − ½tr(ad_u ad_v*) − ¼tr(J_u J_v) − ½⟨ad_H u,v⟩ − ½⟨ad_H v,u⟩`.
pub fn ricci_via_trace_formula(alg: &LieAlgebra, g: &Metric) -> Result<RicciData> {
    g.check(alg)?;
    let n = alg.dim();
    let ads: Vec<RationalMatrix> = (0..n).map(|a| alg.ad_basis(a)).collect();
    let stars = basis_adjoint_stars(alg, g);
    let js: Vec<RationalMatrix> = (0..n).map(|a| j_from_stars(&stars, &unit(n, a))).collect();
    let h = mean_curvature(alg, g)?;
    let ad_h = alg.ad(&h)?;
    let g_ad_h = &g.gram * &ad_h;
    let half = Q::new(1.into(), 2.into());
    let quarter = Q::new(1.into(), 4.into());
    let mut ric = RationalMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut v = -(trace_of_product(&ads[a], &ads[b]) + trace_of_product(&ads[a], &stars[b]))
                * &half;
            v -= trace_of_product(&js[a], &js[b]) * &quarter;
            // ⟨ad_H e_a, e_b⟩ = (G ad_H)_{b a}
            v -= (&g_ad_h[(b, a)] + &g_ad_h[(a, b)]) * &half;
            ric[(a, b)] = v.clone();
            ric[(b, a)] = v;
        }
    }
    Ok(RicciData {
        ric_form: ric,
        metric: g.clone(),
        method: RicciMethod::TraceFormula,
    })
}

/// Production Ricci form.
pub fn ricci_form(alg: &LieAlgebra, g: &Metric) -> Result<RationalMatrix> {
    Ok(ricci_via_trace_formula(alg, g)?.ric_form)
}

/// Kernel of `u ↦ ad_u + ad_u*`.
pub fn killing_subalgebra(alg: &LieAlgebra, g: &Metric) -> Result<Subspace> {
    g.check(alg)?;
    let n = alg.dim();
    let stars = basis_adjoint_stars(alg, g);
    let ops: Vec<RationalMatrix> = (0..n).map(|a| &alg.ad_basis(a) + &stars[a]).collect();
    let m = RationalMatrix::from_fn(n * n, n, |row, a| ops[a][(row / n, row % n)].clone());
    Ok(m.kernel())
}

/// `−¼ tr(J_u²)`, the Ricci value on a Killing vector of a nilpotent algebra.
pub fn killing_ricci_value(alg: &LieAlgebra, g: &Metric, u: &[Q]) -> Result<Q> {
    let j = j_operator(alg, g, u)?;
    Ok(-trace_of_product(&j, &j) / q(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Bracket;
    use crate::rational::qr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn heisenberg() -> LieAlgebra {
        LieAlgebra::new(3, &[Bracket::new(0, 1, vec![(2, q(1))])]).unwrap()
    }

    #[test]
    fn metric_rejects_indefinite() {
        let g = RationalMatrix::from_diagonal(&[q(1), q(-1)]);
        assert!(matches!(
            Metric::new(g),
            Err(Error::NotPositiveDefinite { index: 2, .. })
        ));
        let s = RationalMatrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(1)]]).unwrap();
        assert!(Metric::new(s).is_err());
    }

    #[test]
    fn heisenberg_adjoint_and_j() {
        let h = heisenberg();
        let g = Metric::identity(3);
        let s = adjoint_star(&h, &g, &unit(3, 0)).unwrap();
        assert_eq!(s.mul_vec(&unit(3, 2)).unwrap(), unit(3, 1));
        assert!(s.mul_vec(&unit(3, 0)).unwrap().iter().all(Zero::is_zero));
        let j = j_operator(&h, &g, &unit(3, 2)).unwrap();
        // J_{e3} e1 = ad_{e1}* e3 = e2, J_{e3} e2 = -e1
        assert_eq!(j.column(0), unit(3, 1));
        assert_eq!(j.column(1), vec![q(-1), q(0), q(0)]);
        // e1 ⟂ [g,g]
        assert!(j_operator(&h, &g, &unit(3, 0)).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_levi_civita_and_ricci() {
        let h = heisenberg();
        let g = Metric::identity(3);
        assert_eq!(
            levi_civita(&h, &g, &unit(3, 0), &unit(3, 1)).unwrap(),
            vec![q(0), q(0), qr(1, 2)]
        );
        let expected = RationalMatrix::from_diagonal(&[qr(-1, 2), qr(-1, 2), qr(1, 2)]);
        assert_eq!(ricci_via_curvature(&h, &g).unwrap().ric_form, expected);
        assert_eq!(ricci_via_trace_formula(&h, &g).unwrap().ric_form, expected);
    }

    #[test]
    fn solvable_mean_curvature() {
        let s = LieAlgebra::new(2, &[Bracket::new(0, 1, vec![(1, q(1))])]).unwrap();
        let g = Metric::identity(2);
        assert_eq!(mean_curvature(&s, &g).unwrap(), vec![q(1), q(0)]);
        let r = RicciData {
            method: RicciMethod::TraceFormula,
            ..ricci_via_trace_formula(&s, &g).unwrap()
        };
        assert_eq!(r.ric_form, ricci_via_curvature(&s, &g).unwrap().ric_form);
        // hyperbolic plane: constant curvature -1
        assert_eq!(r.ric_form, RationalMatrix::from_diagonal(&[q(-1), q(-1)]));
    }

    #[test]
    fn abelian_is_flat() {
        let a = LieAlgebra::abelian(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = Metric::random(3, &mut rng);
        assert!(ricci_form(&a, &g).unwrap().is_zero());
        assert_eq!(killing_subalgebra(&a, &g).unwrap(), Subspace::full(3));
        assert!(adjoint_star(&a, &g, &unit(3, 1)).unwrap().is_zero());
    }

    #[test]
    fn levi_civita_identities_on_random_metric() {
        let h = heisenberg();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Metric::random(3, &mut rng);
        let u = vec![q(1), q(-2), q(3)];
        let v = vec![qr(1, 2), q(1), q(0)];
        let w = vec![q(2), q(0), q(-1)];
        let luv = levi_civita(&h, &g, &u, &v).unwrap();
        let lvu = levi_civita(&h, &g, &v, &u).unwrap();
        let diff: Vector = luv.iter().zip(&lvu).map(|(a, b)| a - b).collect();
        assert_eq!(diff, h.bracket(&u, &v).unwrap());
        let luw = levi_civita(&h, &g, &u, &w).unwrap();
        assert!((g.inner(&luv, &w) + g.inner(&v, &luw)).is_zero());
        let s = adjoint_star(&h, &g, &u).unwrap();
        let ad = h.ad(&u).unwrap();
        assert_eq!(
            g.inner(&s.mul_vec(&v).unwrap(), &w),
            g.inner(&v, &ad.mul_vec(&w).unwrap())
        );
    }

    #[test]
    fn metric_in_basis() {
        // f1 = e1 + e2, f2 = e2 with identity Gram in f
        let p = RationalMatrix::from_rows(vec![vec![q(1), q(0)], vec![q(1), q(1)]]).unwrap();
        let m = Metric::in_basis(&RationalMatrix::identity(2), &p).unwrap();
        assert_eq!(m.gram().congruence(&p), RationalMatrix::identity(2));
    }
}
