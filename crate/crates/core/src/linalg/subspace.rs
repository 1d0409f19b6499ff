use num_traits::Zero;

use super::{RationalMatrix, Vector};
use crate::rational::Q;

/// A linear subspace of Qⁿ, stored by its reduced row-echelon basis so that
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self::span(n, &(0..n).map(|i| super::unit(n, i)).collect::<Vec<_>>())
    }

    pub fn span(n: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(n);
        }
        let m = RationalMatrix::from_rows(vectors.to_vec()).expect("ragged spanning set");
        assert_eq!(m.cols(), n, "spanning vectors have wrong length");
        let (r, pivots) = m.rref();
        Self {
            ambient_dim: n,
            basis: (0..pivots.len()).map(|i| r.row(i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Canonical (echelon) basis vectors.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Basis vectors as the columns of an `n × dim` matrix.
    pub fn basis_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient_dim, &self.basis).expect("consistent lengths")
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        RationalMatrix::from_rows(rows).expect("lengths").rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let n = self.ambient_dim;
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(n);
        }
        let p = self.dim();
        // columns: s_1..s_p, -t_1..-t_q ; kernel gives a with Σ a_i s_i = Σ b_j t_j
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|t| t.iter().map(|x| -x).collect::<Vector>()));
        let m = RationalMatrix::from_columns(n, &cols).expect("lengths");
        let k = m.kernel();
        let vectors: Vec<Vector> = k
            .basis()
            .iter()
            .map(|c| {
                let mut v = vec![Q::zero(); n];
                for (i, s) in self.basis.iter().enumerate() {
                    if c[i].is_zero() {
                        continue;
                    }
                    for (vi, si) in v.iter_mut().zip(s) {
                        *vi += &c[i] * si;
                    }
                }
                debug_assert!(c.len() == p + other.dim());
                v
            })
            .collect();
        Subspace::span(n, &vectors)
    }

    /// `{x ∈ self : ⟨x, t⟩_G = 0 for all t ∈ other}`.
    pub fn orthogonal_complement_within(&self, other: &Subspace, gram: &RationalMatrix) -> Subspace {
        let n = self.ambient_dim;
        if self.is_zero() {
            return Subspace::zero(n);
        }
        if other.is_zero() {
            return self.clone();
        }
        let gs: Vec<Vector> = self
            .basis
            .iter()
            .map(|s| gram.mul_vec(s).expect("gram shape"))
            .collect();
        let m = RationalMatrix::from_fn(other.dim(), self.dim(), |j, i| {
            super::dot(&other.basis[j], &gs[i])
        });
        let k = m.kernel();
        let vectors: Vec<Vector> = k
            .basis()
            .iter()
            .map(|c| {
                let mut v = vec![Q::zero(); n];
                for (ci, s) in c.iter().zip(&self.basis) {
                    if ci.is_zero() {
                        continue;
                    }
                    for (vi, si) in v.iter_mut().zip(s) {
                        *vi += ci * si;
                    }
                }
                v
            })
            .collect();
        Subspace::span(n, &vectors)
    }

    /// G-orthogonal complement in the whole space.
    pub fn orthogonal_complement(&self, gram: &RationalMatrix) -> Subspace {
        Subspace::full(self.ambient_dim).orthogonal_complement_within(self, gram)
    }

    /// Image of this subspace under a linear map.
    pub fn image(&self, map: &RationalMatrix) -> Subspace {
        let v: Vec<Vector> = self
            .basis
            .iter()
            .map(|b| map.mul_vec(b).expect("map shape"))
            .collect();
        Subspace::span(map.rows(), &v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use crate::rational::q;

    #[test]
    fn canonical_equality() {
        let a = Subspace::span(3, &[vec![q(1), q(1), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Subspace::span(3, &[unit(3, 0), unit(3, 1), vec![q(2), q(3), q(0)]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, &[unit(3, 0), unit(3, 1)]);
        let b = Subspace::span(3, &[unit(3, 1), unit(3, 2)]);
        assert_eq!(a.intersect(&b), Subspace::span(3, &[unit(3, 1)]));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert!(a.intersect(&Subspace::zero(3)).is_zero());
    }

    #[test]
    fn orthogonal_complement_respects_gram() {
        let g = RationalMatrix::from_rows(vec![
            vec![q(2), q(1)],
            vec![q(1), q(1)],
        ])
        .unwrap();
        let s = Subspace::span(2, &[unit(2, 0)]);
        let c = s.orthogonal_complement(&g);
        assert_eq!(c.dim(), 1);
        let v = &c.basis()[0];
        assert_eq!(crate::linalg::inner(&g, &unit(2, 0), v), q(0));
    }
}
