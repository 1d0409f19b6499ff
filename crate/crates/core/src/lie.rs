//! Lie algebras given by rational structure constants, and their structural
//! subspaces.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, Subspace, Vector};
use crate::rational::Q;

/// One nonzero bracket `[e_i, e_j] = Σ_k c_k e_k` with `i < j` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub rhs: Vec<(usize, Q)>,
}

impl Bracket {
    pub fn new(i: usize, j: usize, rhs: Vec<(usize, Q)>) -> Self {
        Self { i, j, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    /// `table[i][j]` holds the coordinates of `[e_i, e_j]`.
    table: Vec<Vec<Vector>>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub jacobi_ok: bool,
    /// First basis triple (1-based) with a nonzero Jacobi residual.
    pub jacobi_failure: Option<(usize, usize, usize)>,
    /// Dimensions of g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ … until the series stabilizes.
    pub lower_central_dims: Vec<usize>,
    pub nilpotent: bool,
    pub nilpotency_class: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DimensionProfile {
    pub n: usize,
    /// dim [g,g]
    pub d: usize,
    /// dim Z(g)
    pub k: usize,
    /// dim (Z(g) ∩ [g,g])
    pub ell: usize,
}

impl LieAlgebra {
    /// Builds the algebra and checks the Jacobi identity exactly.
    pub fn new(dim: usize, brackets: &[Bracket]) -> Result<Self> {
        let alg = Self::new_unchecked(dim, brackets)?;
        if let Some((i, j, k)) = alg.jacobi_failure() {
            return Err(Error::Jacobi(i + 1, j + 1, k + 1));
        }
        Ok(alg)
    }

    /// Builds the bracket table without the Jacobi check (for diagnostics).
    pub fn new_unchecked(dim: usize, brackets: &[Bracket]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let mut table = vec![vec![vec![Q::zero(); dim]; dim]; dim];
        let mut seen = vec![vec![false; dim]; dim];
        for b in brackets {
            if b.i >= b.j {
                return Err(Error::Parse(format!(
                    "bracket entries need i < j, got ({}, {})",
                    b.i + 1,
                    b.j + 1
                )));
            }
            if b.j >= dim {
                return Err(Error::Parse(format!(
                    "bracket index {} out of range for dimension {dim}",
                    b.j + 1
                )));
            }
            if std::mem::replace(&mut seen[b.i][b.j], true) {
                return Err(Error::Parse(format!(
                    "duplicate bracket ({}, {})",
                    b.i + 1,
                    b.j + 1
                )));
            }
            for (k, c) in &b.rhs {
                if *k >= dim {
                    return Err(Error::Parse(format!("target index {} out of range", k + 1)));
                }
                table[b.i][b.j][*k] += c;
                table[b.j][b.i][*k] -= c;
            }
        }
        Ok(Self {
            dim,
            table,
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
        })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new_unchecked(dim, &[]).expect("abelian algebra")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    /// Nonzero brackets with `i < j` (0-based), in lexicographic order.
    pub fn brackets(&self) -> Vec<Bracket> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let rhs: Vec<(usize, Q)> = self.table[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                if !rhs.is_empty() {
                    out.push(Bracket::new(i, j, rhs));
                }
            }
        }
        out
    }

    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Result<Vector> {
        for x in [u, v] {
            if x.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: x.len(),
                });
            }
        }
        let mut out = vec![Q::zero(); self.dim];
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if v[j].is_zero() || i == j {
                    continue;
                }
                let c = &u[i] * &v[j];
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_u = [u, ·]` in the standard basis.
    pub fn ad(&self, u: &[Q]) -> Result<RationalMatrix> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.len(),
            });
        }
        let n = self.dim;
        let mut m = RationalMatrix::zeros(n, n);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let c = &self.table[i][j][k];
                    if !c.is_zero() {
                        m[(k, j)] += ui * c;
                    }
                }
            }
        }
        Ok(m)
    }

    /// `ad_{e_i}`.
    pub fn ad_basis(&self, i: usize) -> RationalMatrix {
        RationalMatrix::from_fn(self.dim, self.dim, |k, j| self.table[i][j][k].clone())
    }

    fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let e = |i: usize| crate::linalg::unit(n, i);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(&self.table[i][j], &e(k)).expect("dims");
                    let b = self.bracket(&self.table[j][k], &e(i)).expect("dims");
                    let c = self.bracket(&self.table[k][i], &e(j)).expect("dims");
                    if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> ValidityReport {
        let failure = self.jacobi_failure();
        let series = self.lower_central_series();
        let nilpotent = series.last().is_some_and(Subspace::is_zero);
        ValidityReport {
            jacobi_ok: failure.is_none(),
            jacobi_failure: failure.map(|(i, j, k)| (i + 1, j + 1, k + 1)),
            lower_central_dims: series.iter().map(Subspace::dim).collect(),
            nilpotent,
            nilpotency_class: nilpotent.then(|| series.len() - 1),
        }
    }

    /// Elements of `s` that commute with every basis vector.
    pub fn centralizer_within(&self, s: &Subspace) -> Subspace {
        let n = self.dim;
        if s.is_zero() {
            return Subspace::zero(n);
        }
        // x = Σ c_t b_t ; [x, e_j]_k = 0 for all j, k
        let brackets: Vec<Vec<Vector>> = s
            .basis()
            .iter()
            .map(|b| {
                (0..n)
                    .map(|j| self.bracket(b, &crate::linalg::unit(n, j)).expect("dims"))
                    .collect()
            })
            .collect();
        let m = RationalMatrix::from_fn(n * n, s.dim(), |row, t| {
            brackets[t][row / n][row % n].clone()
        });
        let k = m.kernel();
        let b = s.basis_matrix();
        k.image(&b)
    }

    pub fn center(&self) -> Subspace {
        self.centralizer_within(&Subspace::full(self.dim))
    }

    pub fn derived_ideal(&self) -> Subspace {
        let v: Vec<Vector> = (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| self.table[i][j].clone())
            .collect();
        Subspace::span(self.dim, &v)
    }

    /// `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ …`, ending at the first repeated term.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let n = self.dim;
        let mut series = vec![Subspace::full(n)];
        loop {
            let last = series.last().expect("nonempty");
            let v: Vec<Vector> = (0..n)
                .flat_map(|i| {
                    last.basis()
                        .iter()
                        .map(move |b| self.bracket(&crate::linalg::unit(n, i), b).expect("dims"))
                })
                .collect();
            let next = Subspace::span(n, &v);
            if &next == last {
                break;
            }
            let done = next.is_zero();
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(Subspace::is_zero)
    }

    pub fn is_abelian(&self) -> bool {
        self.derived_ideal().is_zero()
    }

    /// `[g,g] ⊂ Z(g)`; abelian algebras count as well.
    pub fn is_two_step(&self) -> bool {
        self.derived_ideal().is_subspace_of(&self.center())
    }

    pub fn dimension_profile(&self) -> Result<DimensionProfile> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let z = self.center();
        let d = self.derived_ideal();
        Ok(DimensionProfile {
            n: self.dim,
            d: d.dim(),
            k: z.dim(),
            ell: z.intersect(&d).dim(),
        })
    }

    /// Same algebra written in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &RationalMatrix) -> Result<LieAlgebra> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.cols(),
            });
        }
        let p_inv = p.inverse()?;
        let cols = p.columns();
        let mut table = vec![vec![vec![Q::zero(); n]; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = self.bracket(&cols[i], &cols[j])?;
                let c = p_inv.mul_vec(&b)?;
                table[j][i] = c.iter().map(|x| -x).collect();
                table[i][j] = c;
            }
        }
        Ok(LieAlgebra {
            dim: n,
            table,
            labels: (1..=n).map(|i| format!("f{i}")).collect(),
        })
    }
}
