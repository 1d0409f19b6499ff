//! Search for a metric with a prescribed Ricci signature. Every candidate is
//! certified by the exact signature computation before it is reported.

use std::sync::OnceLock;

use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::newton::{newton_float, newton_realize, solve_zero_rows, DiagonalFamily, NewtonConfig, ReducedDiagonalFamily};
use super::surd::Surd;
use super::system::{diagonal_ricci_system, seed_in_frame, standard_nice_frame, PolynomialSystem, SystemMode};
use crate::catalog::{CatalogEntry, ParsedRecipe};
use crate::curvature::Metric;
use crate::error::{Error, Result};
use crate::io::{basis_strings, matrix_strings, MetricFile};
use crate::lie::{DimensionProfile, LieAlgebra};
use crate::linalg::{RationalMatrix, SignatureTriple};
use crate::rational::{q, qr, sqrt_lower, sqrt_upper, to_f64, Q};
use crate::signature::{central_obstruction, reduced_in_basis, ricci_signature, sign_set, SignSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Any metric on a 2-step algebra; the identity is used.
    TwoStep,
    /// Diagonal in a nice frame with no tracked rows.
    NiceDiagonal,
    /// One row `α a² − β`, pushed to either side of its root.
    TwoSided,
    /// Rows solved exactly for zero.
    ZeroSolve,
    Newton,
    /// Newton on the reduced diagonal of a non-nice adapted frame.
    ReducedNewton,
    Recipe,
    RandomSearch,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub target: SignatureTriple,
    pub achieved: SignatureTriple,
    pub method: Method,
    /// The metric as produced: a diagonal in a frame when there is one.
    pub metric: MetricFile,
    /// Gram matrix in the standard basis.
    pub gram: Vec<Vec<String>>,
    pub p: usize,
    pub m: SignatureTriple,
    pub reduced: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Realized(Certificate),
    Unrealized { target: SignatureTriple, reason: String },
}

impl Outcome {
    pub fn target(&self) -> SignatureTriple {
        match self {
            Outcome::Realized(c) => c.target,
            Outcome::Unrealized { target, .. } => *target,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Realized(c) => Some(c),
            Outcome::Unrealized { .. } => None,
        }
    }

    pub fn is_realized(&self) -> bool {
        matches!(self, Outcome::Realized(_))
    }
}

#[derive(Clone, Debug)]
pub struct RealizeConfig {
    pub newton: NewtonConfig,
    pub seed: u64,
    pub random_trials: usize,
    /// Random starts when looking for a regular zero of the nice system.
    pub seed_trials: usize,
}

impl Default for RealizeConfig {
    fn default() -> Self {
        Self {
            newton: NewtonConfig::default(),
            seed: 0x5eed,
            random_trials: 120,
            seed_trials: 60,
        }
    }
}

type FloatSeed = (Vec<f64>, Vec<Option<Q>>);

pub struct Realizer {
    alg: LieAlgebra,
    profile: DimensionProfile,
    set: SignSet,
    system: Option<PolynomialSystem>,
    /// Seed by basis position in the nice frame.
    seed: Option<Vec<Surd>>,
    reduced_frame: Option<(RationalMatrix, Vec<Q>)>,
    recipes: Vec<ParsedRecipe>,
    cfg: RealizeConfig,
    searched_seed: OnceLock<Option<FloatSeed>>,
}

impl Realizer {
    /// Uses the standard basis as nice frame when it qualifies.
    pub fn new(alg: &LieAlgebra, cfg: RealizeConfig) -> Result<Self> {
        Self::build(alg, None, None, None, Vec::new(), cfg)
    }

    pub fn for_entry(entry: &CatalogEntry, cfg: RealizeConfig) -> Result<Self> {
        Self::build(
            &entry.algebra,
            entry.nice_basis.clone(),
            entry.nice_seed.clone(),
            entry.reduced_frame.clone(),
            entry.recipes.clone(),
            cfg,
        )
    }

    fn build(
        alg: &LieAlgebra,
        frame: Option<RationalMatrix>,
        seed_e: Option<Vec<Surd>>,
        reduced_frame: Option<(RationalMatrix, Vec<Q>)>,
        recipes: Vec<ParsedRecipe>,
        cfg: RealizeConfig,
    ) -> Result<Self> {
        let profile = alg.dimension_profile()?;
        let system = match &frame {
            Some(f) => Some(diagonal_ricci_system(alg, f, SystemMode::Relaxed)?),
            None => standard_nice_frame(alg).and_then(|f| diagonal_ricci_system(alg, &f, SystemMode::Relaxed).ok()),
        };
        let seed = match (&frame, seed_e) {
            (Some(f), Some(s)) => Some(seed_in_frame(f, &s)?),
            _ => None,
        };
        Ok(Self {
            alg: alg.clone(),
            profile,
            set: sign_set(profile),
            system,
            seed,
            reduced_frame,
            recipes,
            cfg,
            searched_seed: OnceLock::new(),
        })
    }

    pub fn sign_set(&self) -> &SignSet {
        &self.set
    }

    pub fn system(&self) -> Option<&PolynomialSystem> {
        self.system.as_ref()
    }

    /// Every member of the sign set, in order, searched in parallel.
    pub fn realize_all(&self) -> Result<Vec<Outcome>> {
        let targets: Vec<SignatureTriple> = self.set.triples.iter().copied().collect();
        targets.par_iter().map(|t| self.realize(*t)).collect()
    }

    pub fn realize(&self, target: SignatureTriple) -> Result<Outcome> {
        if !self.set.contains(&target) {
            return Err(Error::NotInSignSet { target });
        }
        if let Some(reason) = central_obstruction(&self.profile, &target) {
            return Ok(Outcome::Unrealized { target, reason });
        }
        if self.alg.is_two_step() {
            let g = Metric::identity(self.alg.dim());
            if let Some(c) = self.certify(target, &g, Method::TwoStep, None)? {
                return Ok(Outcome::Realized(c));
            }
        }
        let decs = self.set.decompositions(&target);
        let top = self.profile.k - self.profile.ell;
        if let Some((_, m)) = decs.iter().find(|(p, _)| *p == top) {
            if let Some(c) = self.via_nice(target, *m)? {
                return Ok(Outcome::Realized(c));
            }
        }
        if let Some(c) = self.via_reduced_frame(target, &decs)? {
            return Ok(Outcome::Realized(c));
        }
        if let Some(c) = self.via_recipes(target)? {
            return Ok(Outcome::Realized(c));
        }
        if let Some(c) = self.via_random(target)? {
            return Ok(Outcome::Realized(c));
        }
        Ok(Outcome::Unrealized {
            target,
            reason: "no certified metric found by the nice-frame, recipe or random searches".into(),
        })
    }

    /// Exact check; `Some` only when the signature is `target`.
    fn certify(
        &self,
        target: SignatureTriple,
        g: &Metric,
        method: Method,
        frame: Option<(&RationalMatrix, &[Q])>,
    ) -> Result<Option<Certificate>> {
        let report = ricci_signature(&self.alg, g)?;
        if report.full_inertia != report.signature {
            return Err(Error::Internal(format!(
                "reduced signature {} disagrees with the inertia {} of the Ricci form",
                report.signature, report.full_inertia
            )));
        }
        if report.signature != target {
            return Ok(None);
        }
        let metric = match frame {
            Some((basis, x)) => MetricFile {
                basis_change: Some(basis_strings(basis)),
                ..MetricFile::from_diag(x)
            },
            None => MetricFile::from_gram(g.gram()),
        };
        Ok(Some(Certificate {
            target,
            achieved: report.signature,
            method,
            metric,
            gram: matrix_strings(g.gram()),
            p: report.splitting.k_minus.dim(),
            m: report.reduced.reduced_signature,
            reduced: matrix_strings(report.reduced.reduced()),
        }))
    }

    fn certify_diag(
        &self,
        target: SignatureTriple,
        basis: &RationalMatrix,
        x: &[Q],
        method: Method,
    ) -> Result<Option<Certificate>> {
        let g = Metric::in_basis(&RationalMatrix::from_diagonal(x), basis)?;
        self.certify(target, &g, method, Some((basis, x)))
    }

    fn via_nice(&self, target: SignatureTriple, m: SignatureTriple) -> Result<Option<Certificate>> {
        let Some(sys) = &self.system else {
            return Ok(None);
        };
        let n = sys.nvars();
        let rows = sys.len();
        if rows == 0 {
            return self.certify_diag(target, &sys.basis, &vec![Q::one(); n], Method::NiceDiagonal);
        }
        let exact_seed: Option<Vec<Q>> = self.seed.as_ref().and_then(|s| s.iter().map(Surd::to_q).collect());
        if rows == 1 {
            let base = exact_seed.clone().unwrap_or_else(|| vec![Q::one(); n]);
            let sign = if m.s_minus == 1 { -1 } else if m.s_zero == 1 { 0 } else { 1 };
            if let Some(x) = two_sided(sys, &base, sign) {
                if let Some(c) = self.certify_diag(target, &sys.basis, &x, Method::TwoSided)? {
                    return Ok(Some(c));
                }
            }
        }
        let Some((seed_f, seed_q)) = self.float_seed(sys) else {
            return Ok(None);
        };
        for signs in arrangements(m) {
            if let Some(x) = exact_seed.as_ref().and_then(|s| solve_zero_rows(sys, s, &signs)) {
                let method = if signs.iter().all(|&s| s == 0) { Method::ZeroSolve } else { Method::Newton };
                if let Some(c) = self.certify_diag(target, &sys.basis, &x, method)? {
                    return Ok(Some(c));
                }
            }
            if let Ok(x) = newton_realize(sys, &seed_f, &seed_q, &signs, &self.cfg.newton) {
                if let Some(c) = self.certify_diag(target, &sys.basis, &x, Method::Newton)? {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }

    /// The catalog seed if there is one, else a regular zero found from
    /// random starts. Coordinates outside the rows stay exact.
    fn float_seed(&self, sys: &PolynomialSystem) -> Option<FloatSeed> {
        if let Some(s) = &self.seed {
            return Some((s.iter().map(Surd::to_f64).collect(), s.iter().map(Surd::to_q).collect()));
        }
        self.searched_seed
            .get_or_init(|| search_seed(sys, &self.cfg))
            .clone()
    }

    fn via_reduced_frame(
        &self,
        target: SignatureTriple,
        decs: &[(usize, SignatureTriple)],
    ) -> Result<Option<Certificate>> {
        let Some((basis, seed)) = &self.reduced_frame else {
            return Ok(None);
        };
        let g0 = Metric::in_basis(&RationalMatrix::from_diagonal(seed), basis)?;
        let [n1, n2, n3, _] = reduced_in_basis(&self.alg, &g0, basis)?.sizes();
        let Some((_, m)) = decs.iter().find(|(p, _)| *p == n3) else {
            return Ok(None);
        };
        let fam = ReducedDiagonalFamily {
            alg: &self.alg,
            basis: basis.clone(),
            o_plus: (n1..n1 + n2).collect(),
        };
        let seed_f: Vec<f64> = seed.iter().map(to_f64).collect();
        let seed_q: Vec<Option<Q>> = seed.iter().cloned().map(Some).collect();
        for signs in arrangements(*m) {
            if let Ok(x) = newton_realize(&fam, &seed_f, &seed_q, &signs, &self.cfg.newton) {
                if let Some(c) = self.certify_diag(target, basis, &x, Method::ReducedNewton)? {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }

    fn via_recipes(&self, target: SignatureTriple) -> Result<Option<Certificate>> {
        for recipe in &self.recipes {
            for ladder in [ladder(), wide_ladder()] {
                for combo in product(&ladder, recipe.sweep.len()) {
                    let mut x = recipe.values.clone();
                    for (&slot, v) in recipe.sweep.iter().zip(combo) {
                        x[slot] = v;
                    }
                    if let Some(c) = self.certify_diag(target, &recipe.basis, &x, Method::Recipe)? {
                        return Ok(Some(c));
                    }
                }
            }
        }
        Ok(None)
    }

    fn via_random(&self, target: SignatureTriple) -> Result<Option<Certificate>> {
        let code = (target.s_minus as u64) << 32 | (target.s_zero as u64) << 16 | target.s_plus as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ code);
        let n = self.alg.dim();
        let values = wide_ladder();
        for i in 0..self.cfg.random_trials {
            let frame = match i % 3 {
                0 => self.system.as_ref().map(|s| &s.basis),
                1 => self.recipes.choose(&mut rng).map(|r| &r.basis),
                _ => None,
            };
            let found = match frame {
                Some(basis) => {
                    let x: Vec<Q> = (0..n).map(|_| values.choose(&mut rng).unwrap().clone()).collect();
                    self.certify_diag(target, basis, &x, Method::RandomSearch)?
                }
                None => self.certify(target, &Metric::random(n, &mut rng), Method::RandomSearch, None)?,
            };
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Sets the row variable so that `α a² − β` has the requested sign, keeping
/// the other coordinates of `base`.
fn two_sided(sys: &PolynomialSystem, base: &[Q], sign: i8) -> Option<Vec<Q>> {
    if sign == 0 {
        return solve_zero_rows(sys, base, &[0]);
    }
    let (alpha, beta) = sys.two_sided_coefficients(0, base);
    if !alpha.is_positive() || !beta.is_positive() {
        return None;
    }
    let a = if sign > 0 {
        sqrt_upper(&(q(2) * &beta / &alpha))
    } else {
        sqrt_lower(&(&beta / (q(2) * &alpha)))
    };
    let mut x = base.to_vec();
    x[sys.rows[0]] = a;
    Some(x)
}

fn search_seed(sys: &PolynomialSystem, cfg: &RealizeConfig) -> Option<FloatSeed> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let choices = ladder();
    let zeros = vec![0.0; sys.len()];
    for _ in 0..cfg.seed_trials {
        let x0: Vec<Q> = (0..sys.nvars()).map(|_| choices.choose(&mut rng).unwrap().clone()).collect();
        let exact: Vec<Option<Q>> = (0..sys.nvars())
            .map(|v| (!sys.rows.contains(&v)).then(|| x0[v].clone()))
            .collect();
        let start: Vec<f64> = x0.iter().map(to_f64).collect();
        let Some(x) = newton_float(sys, &start, &zeros, &cfg.newton) else {
            continue;
        };
        let sv = sys.jacobian_f64(&x).singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if hi > 0.0 && lo > 1e-8 * hi {
            return Some((x, exact));
        }
    }
    None
}

/// Distinct sign vectors with `m⁻` entries −1, `m⁰` zeros and `m⁺` entries +1.
pub fn arrangements(m: SignatureTriple) -> Vec<Vec<i8>> {
    fn go(counts: [usize; 3], cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for (i, s) in [-1i8, 0, 1].into_iter().enumerate() {
            if counts[i] > 0 {
                let mut next = counts;
                next[i] -= 1;
                cur.push(s);
                go(next, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go([m.s_minus, m.s_zero, m.s_plus], &mut Vec::new(), &mut out);
    out
}

fn ladder() -> Vec<Q> {
    vec![
        qr(1, 8),
        qr(1, 4),
        qr(1, 3),
        qr(1, 2),
        qr(2, 3),
        q(1),
        qr(3, 2),
        q(2),
        q(3),
        q(4),
        q(8),
    ]
}

fn wide_ladder() -> Vec<Q> {
    vec![
        qr(1, 100),
        qr(1, 20),
        qr(1, 10),
        qr(1, 5),
        qr(2, 5),
        qr(3, 4),
        qr(5, 4),
        qr(5, 2),
        q(5),
        q(10),
        q(20),
        q(100),
    ]
}

fn product(values: &[Q], k: usize) -> Vec<Vec<Q>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut p = p.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}
