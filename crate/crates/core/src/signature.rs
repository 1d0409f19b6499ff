//! Characteristic splitting, the block reduction of the Ricci form, and the
//! admissible signature set of a nilpotent algebra.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::curvature::{killing_subalgebra, ricci_form, Metric};
use crate::error::{Error, Result};
use crate::lie::{DimensionProfile, LieAlgebra};
use crate::linalg::{inertia, schur_reduce, RationalMatrix, SchurReduction, SignatureTriple, Subspace};

/// `g = K⁺ ⊕ O⁺ ⊕ K⁻ ⊕ O⁻` where `K` is the Killing subalgebra and
/// `K⁺ = K ∩ [g,g]`, `K⁻ = K ∩ [g,g]^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicSplitting {
    pub k_plus: Subspace,
    pub o_plus: Subspace,
    pub k_minus: Subspace,
    pub o_minus: Subspace,
    /// Columns: bases of K⁺, O⁺, K⁻, O⁻ in that order.
    pub basis: RationalMatrix,
}

impl CharacteristicSplitting {
    pub fn sizes(&self) -> [usize; 4] {
        [
            self.k_plus.dim(),
            self.o_plus.dim(),
            self.k_minus.dim(),
            self.o_minus.dim(),
        ]
    }

    fn parts(&self) -> [&Subspace; 4] {
        [&self.k_plus, &self.o_plus, &self.k_minus, &self.o_minus]
    }

    /// Checks that the columns of `basis`, cut by the splitting sizes, span
    /// K⁺, O⁺, K⁻, O⁻ in order.
    pub fn is_adapted(&self, basis: &RationalMatrix) -> bool {
        if basis.cols() != self.basis.cols() || basis.rank() != basis.cols() {
            return false;
        }
        let cols = basis.columns();
        let mut start = 0;
        for (part, size) in self.parts().into_iter().zip(self.sizes()) {
            let span = Subspace::span(basis.rows(), &cols[start..start + size]);
            if &span != part {
                return false;
            }
            start += size;
        }
        true
    }
}

pub fn characteristic_splitting(alg: &LieAlgebra, g: &Metric) -> Result<CharacteristicSplitting> {
    let n = alg.dim();
    let k = killing_subalgebra(alg, g)?;
    let d = alg.derived_ideal();
    let d_perp = d.orthogonal_complement(g.gram());
    let k_plus = k.intersect(&d);
    let k_minus = k.intersect(&d_perp);
    let o_plus = d.orthogonal_complement_within(&k_plus, g.gram());
    let o_minus = d_perp.orthogonal_complement_within(&k_minus, g.gram());
    let cols: Vec<_> = [&k_plus, &o_plus, &k_minus, &o_minus]
        .iter()
        .flat_map(|s| s.basis().iter().cloned())
        .collect();
    if cols.len() != n {
        return Err(Error::Internal(format!(
            "characteristic splitting has {} vectors in dimension {n}",
            cols.len()
        )));
    }
    let basis = RationalMatrix::from_columns(n, &cols)?;
    Ok(CharacteristicSplitting {
        k_plus,
        o_plus,
        k_minus,
        o_minus,
        basis,
    })
}

#[derive(Clone, Debug)]
pub struct ReducedRicci {
    pub blocks: SchurReduction,
    /// `(m⁻, m⁰, m⁺)`, the inertia of the reduced matrix.
    pub reduced_signature: SignatureTriple,
}

impl ReducedRicci {
    pub fn reduced(&self) -> &RationalMatrix {
        &self.blocks.r
    }

    pub fn sizes(&self) -> [usize; 4] {
        self.blocks.sizes
    }

    /// `(n4 + m⁻, n3 + m⁰, n1 + m⁺)`.
    pub fn signature(&self) -> SignatureTriple {
        let [n1, _, n3, n4] = self.blocks.sizes;
        SignatureTriple::new(n4, n3, n1) + self.reduced_signature
    }
}

#[derive(Clone, Debug)]
pub struct SignatureReport {
    pub signature: SignatureTriple,
    /// Inertia of the full Ricci form, computed independently.
    pub full_inertia: SignatureTriple,
    pub ric_form: RationalMatrix,
    pub splitting: CharacteristicSplitting,
    pub reduced: ReducedRicci,
}

/// Reduces the Ricci form written in a basis adapted to the splitting.
pub fn reduce_ricci(ric: &RationalMatrix, basis: &RationalMatrix, sizes: [usize; 4]) -> Result<ReducedRicci> {
    let m = ric.congruence(basis);
    let blocks = schur_reduce(&m, sizes).map_err(|e| match e {
        Error::Singular => Error::Internal("singular Z or Y block".into()),
        other => other,
    })?;
    let [n1, _, _, n4] = sizes;
    if inertia(&blocks.z)? != SignatureTriple::new(0, 0, n1) {
        return Err(Error::Internal("Ricci form is not positive definite on K⁺".into()));
    }
    if inertia(&blocks.y)? != SignatureTriple::new(n4, 0, 0) {
        return Err(Error::Internal("Ricci form is not negative definite on O⁻".into()));
    }
    let reduced_signature = inertia(&blocks.r)?;
    Ok(ReducedRicci {
        blocks,
        reduced_signature,
    })
}

pub fn ricci_signature(alg: &LieAlgebra, g: &Metric) -> Result<SignatureReport> {
    let ric = ricci_form(alg, g)?;
    let splitting = characteristic_splitting(alg, g)?;
    let reduced = reduce_ricci(&ric, &splitting.basis, splitting.sizes())?;
    let signature = reduced.signature();
    let full_inertia = inertia(&ric)?;
    if signature != full_inertia {
        return Err(Error::Internal(format!(
            "reduced signature {signature} disagrees with full inertia {full_inertia}"
        )));
    }
    Ok(SignatureReport {
        signature,
        full_inertia,
        ric_form: ric,
        splitting,
        reduced,
    })
}

/// Reduced matrix in a caller-chosen basis adapted to the splitting, so that
/// its entries can be compared with closed forms written in that basis.
pub fn reduced_in_basis(alg: &LieAlgebra, g: &Metric, basis: &RationalMatrix) -> Result<ReducedRicci> {
    let splitting = characteristic_splitting(alg, g)?;
    if !splitting.is_adapted(basis) {
        return Err(Error::Frame(
            "basis is not adapted to the characteristic splitting".into(),
        ));
    }
    reduce_ricci(&ricci_form(alg, g)?, basis, splitting.sizes())
}

/// `(dim [g,g]^⊥ − dim K⁻, dim K⁻, dim K⁺)`.
pub fn signature_underestimate(alg: &LieAlgebra, g: &Metric) -> Result<SignatureTriple> {
    let s = characteristic_splitting(alg, g)?;
    let [n1, _, n3, n4] = s.sizes();
    Ok(SignatureTriple::new(n4, n3, n1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignSet {
    pub profile: DimensionProfile,
    pub triples: BTreeSet<SignatureTriple>,
}

impl SignSet {
    pub fn contains(&self, t: &SignatureTriple) -> bool {
        self.triples.contains(t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Range of `p` admitted by the profile.
    pub fn p_range(&self) -> std::ops::RangeInclusive<usize> {
        p_range(&self.profile)
    }

    /// Every `(p, m)` with `(n−d−p+m⁻, p+m⁰, ℓ+m⁺) = t`.
    pub fn decompositions(&self, t: &SignatureTriple) -> Vec<(usize, SignatureTriple)> {
        let DimensionProfile { n, d, ell, .. } = self.profile;
        self.p_range()
            .filter_map(|p| {
                let m = t.checked_sub(&SignatureTriple::new(n - d - p, p, ell))?;
                (m.total() == d - ell).then_some((p, m))
            })
            .collect()
    }
}

fn p_range(p: &DimensionProfile) -> std::ops::RangeInclusive<usize> {
    p.k.saturating_sub(p.d)..=p.k - p.ell
}

/// All compositions `(m⁻, m⁰, m⁺)` of `s` in lexicographic order.
pub fn compositions(s: usize) -> Vec<SignatureTriple> {
    let mut out = Vec::new();
    for a in 0..=s {
        for b in 0..=s - a {
            out.push(SignatureTriple::new(a, b, s - a - b));
        }
    }
    out
}

pub fn sign_set(profile: DimensionProfile) -> SignSet {
    let DimensionProfile { n, d, ell, .. } = profile;
    let mut triples = BTreeSet::new();
    for p in p_range(&profile) {
        for m in compositions(d - ell) {
            triples.insert(SignatureTriple::new(n - d - p, p, ell) + m);
        }
    }
    SignSet { profile, triples }
}

/// For central `z`, `ric(z,z) = ¼ Σ ⟨[x_i,x_j], z⟩² ≥ 0` in an orthonormal
/// basis, so the Ricci form is semidefinite on the centre and `s⁻ ≤ n − k`.
/// Returns a reason when `t` breaks this bound.
pub fn central_obstruction(profile: &DimensionProfile, t: &SignatureTriple) -> Option<String> {
    let bound = profile.n - profile.k;
    (t.s_minus > bound).then(|| {
        format!(
            "s⁻ = {} exceeds n − dim Z = {bound}: the Ricci form is positive semidefinite on the centre",
            t.s_minus
        )
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub signature: SignatureTriple,
    pub p: usize,
    pub m: SignatureTriple,
    pub profile: DimensionProfile,
}

pub fn check_membership(alg: &LieAlgebra, g: &Metric) -> Result<Membership> {
    let profile = alg.dimension_profile()?;
    let report = ricci_signature(alg, g)?;
    let set = sign_set(profile);
    let p = report.splitting.k_minus.dim();
    let m = report.reduced.reduced_signature;
    if !set.contains(&report.signature)
        || SignatureTriple::new(profile.n - profile.d - p, p, profile.ell) + m != report.signature
    {
        return Err(Error::Internal(format!(
            "signature {} with p = {p}, m = {m} is not a member of the admissible set",
            report.signature
        )));
    }
    Ok(Membership {
        signature: report.signature,
        p,
        m,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Bracket;
    use crate::linalg::unit;
    use crate::rational::q;

    fn heisenberg() -> LieAlgebra {
        LieAlgebra::new(3, &[Bracket::new(0, 1, vec![(2, q(1))])]).unwrap()
    }

    fn t(a: usize, b: usize, c: usize) -> SignatureTriple {
        SignatureTriple::new(a, b, c)
    }

    #[test]
    fn heisenberg_splitting_and_signature() {
        let h = heisenberg();
        let g = Metric::identity(3);
        let s = characteristic_splitting(&h, &g).unwrap();
        assert_eq!(s.k_plus, Subspace::span(3, &[unit(3, 2)]));
        assert!(s.o_plus.is_zero() && s.k_minus.is_zero());
        assert_eq!(s.o_minus, Subspace::span(3, &[unit(3, 0), unit(3, 1)]));
        let r = ricci_signature(&h, &g).unwrap();
        assert_eq!(r.signature, t(2, 0, 1));
        assert_eq!(r.reduced.reduced().rows(), 0);
        assert_eq!(signature_underestimate(&h, &g).unwrap(), t(2, 0, 1));
    }

    #[test]
    fn abelian_signature() {
        let a = LieAlgebra::abelian(4);
        let g = Metric::identity(4);
        assert_eq!(ricci_signature(&a, &g).unwrap().signature, t(0, 4, 0));
        assert_eq!(signature_underestimate(&a, &g).unwrap(), t(0, 4, 0));
        let s = characteristic_splitting(&a, &g).unwrap();
        assert_eq!(s.sizes(), [0, 0, 4, 0]);
    }

    #[test]
    fn sign_set_examples() {
        let heis = DimensionProfile { n: 3, d: 1, k: 1, ell: 1 };
        assert_eq!(sign_set(heis).triples, BTreeSet::from([t(2, 0, 1)]));
        let l53 = DimensionProfile { n: 5, d: 2, k: 2, ell: 1 };
        assert_eq!(
            sign_set(l53).triples,
            BTreeSet::from([t(2, 1, 2), t(2, 2, 1), t(3, 0, 2), t(3, 1, 1), t(4, 0, 1)])
        );
        // 2-step: ℓ = d
        let two = DimensionProfile { n: 6, d: 2, k: 3, ell: 2 };
        assert_eq!(sign_set(two).triples, BTreeSet::from([t(3, 1, 2)]));
    }

    #[test]
    fn decompositions_cover_members() {
        let set = sign_set(DimensionProfile { n: 5, d: 2, k: 2, ell: 1 });
        for tr in &set.triples {
            assert!(!set.decompositions(tr).is_empty());
        }
        assert!(set.decompositions(&t(1, 1, 3)).is_empty());
    }

    #[test]
    fn membership_refuses_non_nilpotent() {
        let s = LieAlgebra::new(2, &[Bracket::new(0, 1, vec![(1, q(1))])]).unwrap();
        let g = Metric::identity(2);
        assert!(ricci_signature(&s, &g).is_ok());
        assert!(matches!(check_membership(&s, &g), Err(Error::NotNilpotent)));
    }

    #[test]
    fn adapted_basis_check() {
        let h = heisenberg();
        let g = Metric::identity(3);
        let b = RationalMatrix::from_columns(3, &[unit(3, 2), unit(3, 1), unit(3, 0)]).unwrap();
        assert!(reduced_in_basis(&h, &g, &b).is_ok());
        let bad = RationalMatrix::identity(3);
        assert!(matches!(reduced_in_basis(&h, &g, &bad), Err(Error::Frame(_))));
    }
}
