//! Damped Newton on `F(x) = ε·ŝ` followed by rationalization and exact
//! solving of the rows that must vanish.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use super::system::PolynomialSystem;
use crate::curvature::Metric;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{RationalMatrix, Vector};
use crate::rational::{approximate, from_f64_exact, q, sqrt_exact, to_f64, Q};
use crate::signature::reduced_in_basis;

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonConfig {
    pub max_iters: usize,
    pub tolerance: f64,
    pub eps_ladder: Vec<f64>,
    pub max_denominator: u64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            max_iters: 200,
            tolerance: 1e-12,
            eps_ladder: vec![0.25, 1.0 / 16.0, 1.0 / 64.0],
            max_denominator: 1_000_000,
        }
    }
}

/// A family of diagonal Ricci values `x ↦ (R_1(x), …, R_r(x))` over
/// positive parameters, whose signs decide the reduced signature.
pub trait DiagonalFamily: Sync {
    fn nvars(&self) -> usize;
    /// Parameters moved by Newton, one per row.
    fn free(&self) -> Vec<usize>;
    fn rows(&self) -> usize {
        self.free().len()
    }
    fn eval_f64(&self, x: &[f64]) -> Vec<f64>;
    fn eval_exact(&self, x: &[Q]) -> Result<Vec<Q>>;
    /// Typical size of each row near `x`.
    fn scale_f64(&self, x: &[f64]) -> Vec<f64> {
        let v = self.eval_f64(x);
        vec![1.0; v.len()]
    }
    fn jacobian_f64(&self, x: &[f64]) -> DMatrix<f64> {
        let free = self.free();
        let r = self.rows();
        let mut j = DMatrix::zeros(r, free.len());
        for (c, &v) in free.iter().enumerate() {
            let h = 1e-6 * x[v].abs().max(1e-3);
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[v] += h;
            xm[v] -= h;
            let fp = self.eval_f64(&xp);
            let fm = self.eval_f64(&xm);
            for row in 0..r {
                j[(row, c)] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        j
    }
    /// Variables worth trying when row `row` has to vanish exactly.
    fn pivots(&self, row: usize) -> Vec<usize>;
    /// Positive exact values of `x[var]` making row `row` vanish.
    fn zero_roots(&self, row: usize, var: usize, x: &[Q]) -> Vec<Q>;
}

impl DiagonalFamily for PolynomialSystem {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn free(&self) -> Vec<usize> {
        self.rows.clone()
    }

    fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.polys.iter().map(|p| p.eval_f64(x)).collect()
    }

    fn eval_exact(&self, x: &[Q]) -> Result<Vec<Q>> {
        Ok(self.eval(x))
    }

    fn scale_f64(&self, x: &[f64]) -> Vec<f64> {
        self.polys
            .iter()
            .map(|p| p.magnitude_f64(x).max(f64::MIN_POSITIVE))
            .collect()
    }

    fn jacobian_f64(&self, x: &[f64]) -> DMatrix<f64> {
        let r = self.polys.len();
        DMatrix::from_fn(r, r, |i, c| self.polys[i].derivative(self.rows[c]).eval_f64(x))
    }

    fn pivots(&self, row: usize) -> Vec<usize> {
        let p = &self.polys[row];
        let mut v: Vec<usize> = (0..self.nvars()).filter(|&i| p.depends_on(i)).collect();
        // linear variables first, then the row's own variable
        v.sort_by_key(|&i| (p.degree_in(i) != 1, i != self.rows[row], i));
        v
    }

    fn zero_roots(&self, row: usize, var: usize, x: &[Q]) -> Vec<Q> {
        positive_roots(&self.polys[row].univariate(var, x))
    }
}

/// Positive rational roots of `c_0 + c_1 t + c_2 t²` (higher degrees: none).
pub fn positive_roots(c: &[Q]) -> Vec<Q> {
    let roots: Vec<Q> = match c.len() {
        2 if !c[1].is_zero() => vec![-&c[0] / &c[1]],
        3 if !c[2].is_zero() => {
            let disc = &c[1] * &c[1] - q(4) * &c[2] * &c[0];
            match sqrt_exact(&disc) {
                Some(s) => {
                    let two_a = q(2) * &c[2];
                    vec![(-&c[1] + &s) / &two_a, (-&c[1] - &s) / &two_a]
                }
                None => Vec::new(),
            }
        }
        _ => Vec::new(),
    };
    let mut out: Vec<Q> = roots.into_iter().filter(|r| r.is_positive()).collect();
    out.dedup();
    out
}

/// Diagonal entries of the reduced matrix for metrics diagonal in a fixed
/// (not necessarily nice) basis adapted to the characteristic splitting.
pub struct ReducedDiagonalFamily<'a> {
    pub alg: &'a LieAlgebra,
    pub basis: RationalMatrix,
    /// Positions of the `O⁺` block.
    pub o_plus: Vec<usize>,
}

impl ReducedDiagonalFamily<'_> {
    fn reduced(&self, x: &[Q]) -> Result<RationalMatrix> {
        let g = Metric::in_basis(&RationalMatrix::from_diagonal(x), &self.basis)?;
        Ok(reduced_in_basis(self.alg, &g, &self.basis)?.reduced().clone())
    }

    fn row_along(&self, row: usize, var: usize, x: &[Q], t: &Q) -> Option<Q> {
        let mut y = x.to_vec();
        y[var] = t.clone();
        self.reduced(&y).ok().map(|r| r[(row, row)].clone())
    }
}

impl DiagonalFamily for ReducedDiagonalFamily<'_> {
    fn nvars(&self) -> usize {
        self.basis.cols()
    }

    fn free(&self) -> Vec<usize> {
        self.o_plus.clone()
    }

    fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        let xq: Option<Vec<Q>> = x.iter().map(|&v| from_f64_exact(v)).collect();
        match xq.and_then(|xq| self.eval_exact(&xq).ok()) {
            Some(v) => v.iter().map(to_f64).collect(),
            None => vec![f64::NAN; self.o_plus.len()],
        }
    }

    fn eval_exact(&self, x: &[Q]) -> Result<Vec<Q>> {
        let r = self.reduced(x)?;
        Ok((0..r.rows()).map(|i| r[(i, i)].clone()).collect())
    }

    fn pivots(&self, row: usize) -> Vec<usize> {
        let own = self.o_plus[row];
        let mut v: Vec<usize> = (0..self.nvars()).collect();
        v.sort_by_key(|&i| (i != own, i));
        v
    }

    fn zero_roots(&self, row: usize, var: usize, x: &[Q]) -> Vec<Q> {
        let Some((num, _)) = fit_univariate_rational(|t| self.row_along(row, var, x, t)) else {
            return Vec::new();
        };
        positive_roots(&num)
            .into_iter()
            .filter(|r| self.row_along(row, var, x, r).is_some_and(|v| v.is_zero()))
            .collect()
    }
}

/// Recovers `f = N/D` with `deg N, deg D ≤ 2` from exact samples and checks
/// the fit on extra points. Returns the coefficients of `N` and `D`.
pub fn fit_univariate_rational(f: impl Fn(&Q) -> Option<Q>) -> Option<(Vec<Q>, Vec<Q>)> {
    let points: Vec<Q> = (1..=9).map(|i| Q::new(i.into(), 3.into()) + Q::new(1.into(), 7.into())).collect();
    let values: Vec<(Q, Q)> = points
        .iter()
        .filter_map(|t| f(t).map(|v| (t.clone(), v)))
        .collect();
    for total in 0..=4usize {
        for dn in 0..=total.min(2) {
            let dd = total - dn;
            if dd > 2 {
                continue;
            }
            let unknowns = dn + dd + 2;
            let needed = unknowns + 2;
            if values.len() < needed {
                return None;
            }
            let (fit, check) = values.split_at(unknowns + 1);
            let m = RationalMatrix::from_fn(fit.len(), unknowns, |s, c| {
                let (t, v) = &fit[s];
                if c <= dn {
                    pow(t, c)
                } else {
                    -(v * pow(t, c - dn - 1))
                }
            });
            let k = m.kernel();
            if k.dim() != 1 {
                continue;
            }
            let sol = &k.basis()[0];
            let num: Vector = sol[..=dn].to_vec();
            let den: Vector = sol[dn + 1..].to_vec();
            let ok = check.iter().all(|(t, v)| {
                let d = horner(&den, t);
                !d.is_zero() && horner(&num, t) == v * d
            });
            if ok {
                return Some((num, den));
            }
        }
    }
    None
}

fn pow(t: &Q, k: usize) -> Q {
    (0..k).fold(q(1), |acc, _| acc * t)
}

fn horner(c: &[Q], t: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, a| acc * t + a)
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn exact_sign(v: &Q) -> i8 {
    match v.cmp(&Q::zero()) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

fn solve_lin(j: &DMatrix<f64>, r: &DVector<f64>) -> Option<DVector<f64>> {
    j.clone().lu().solve(r).filter(|d| d.iter().all(|x| x.is_finite()))
}

/// Float Newton toward `F = y` from `x0`, moving only the free coordinates.
pub fn newton_float<F: DiagonalFamily + ?Sized>(
    fam: &F,
    x0: &[f64],
    y: &[f64],
    cfg: &NewtonConfig,
) -> Option<Vec<f64>> {
    let free = fam.free();
    let scale = y
        .iter()
        .map(|v| v.abs())
        .chain(fam.scale_f64(x0))
        .fold(1e-300f64, f64::max);
    let tol = cfg.tolerance * scale.max(1.0);
    let mut x = x0.to_vec();
    let resid = |x: &[f64]| -> (DVector<f64>, f64) {
        let f = fam.eval_f64(x);
        let r = DVector::from_iterator(f.len(), f.iter().zip(y).map(|(a, b)| a - b));
        let n = r.amax();
        (r, if n.is_finite() { n } else { f64::INFINITY })
    };
    let (mut r, mut norm) = resid(&x);
    for _ in 0..cfg.max_iters {
        if norm <= tol {
            return Some(x);
        }
        let j = fam.jacobian_f64(&x);
        let delta = solve_lin(&j, &(-&r))?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut xn = x.clone();
            for (c, &v) in free.iter().enumerate() {
                xn[v] += t * delta[c];
            }
            if xn.iter().all(|&v| v > 0.0) {
                let (rn, nn) = resid(&xn);
                if nn < norm {
                    x = xn;
                    r = rn;
                    norm = nn;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return (norm <= tol).then_some(x);
        }
    }
    (norm <= tol).then_some(x)
}

/// Rationalizes a float point; coordinates already exact in `exact` are kept.
fn rationalize(x: &[f64], exact: &[Option<Q>], max_den: u64) -> Vec<Q> {
    x.iter()
        .zip(exact)
        .map(|(&v, e)| match e {
            Some(qv) if to_f64(qv) == v => qv.clone(),
            _ => {
                let r = approximate(v, max_den);
                if r.is_positive() {
                    r
                } else {
                    approximate(v, max_den.saturating_mul(1000))
                }
            }
        })
        .collect()
}

fn signs_match(values: &[Q], signs: &[i8]) -> bool {
    values.iter().zip(signs).all(|(v, &s)| exact_sign(v) == s)
}

/// Sets the rows with zero target exactly to zero by solving each one for a
/// pivot variable, trying orders and pivots until all signs certify.
pub fn solve_zero_rows<F: DiagonalFamily + ?Sized>(fam: &F, x: &[Q], signs: &[i8]) -> Option<Vec<Q>> {
    let zeros: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] == 0).collect();
    if let Ok(v) = fam.eval_exact(x) {
        if signs_match(&v, signs) {
            return Some(x.to_vec());
        }
    }
    if zeros.is_empty() {
        return None;
    }
    let mut budget = 400usize;
    for order in permutations(&zeros) {
        let mut used = Vec::new();
        if let Some(sol) = dfs(fam, x.to_vec(), &order, 0, signs, &mut used, &mut budget) {
            return Some(sol);
        }
        if budget == 0 {
            break;
        }
    }
    None
}

fn dfs<F: DiagonalFamily + ?Sized>(
    fam: &F,
    x: Vec<Q>,
    order: &[usize],
    depth: usize,
    signs: &[i8],
    used: &mut Vec<usize>,
    budget: &mut usize,
) -> Option<Vec<Q>> {
    if *budget == 0 {
        return None;
    }
    if depth == order.len() {
        *budget -= 1;
        let v = fam.eval_exact(&x).ok()?;
        return signs_match(&v, signs).then_some(x);
    }
    let row = order[depth];
    let mut pivots = fam.pivots(row);
    pivots.retain(|v| !used.contains(v));
    for var in pivots {
        let mut roots = fam.zero_roots(row, var, &x);
        roots.sort_by(|a, b| (a - &x[var]).abs().cmp(&(b - &x[var]).abs()));
        for root in roots {
            let mut y = x.clone();
            y[var] = root;
            used.push(var);
            let r = dfs(fam, y, order, depth + 1, signs, used, budget);
            used.pop();
            if r.is_some() {
                return r;
            }
            if *budget == 0 {
                return None;
            }
        }
    }
    None
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Finds a rational point whose rows have exactly the requested signs,
/// starting from a point `seed` near a regular zero of the family.
pub fn newton_realize<F: DiagonalFamily + ?Sized>(
    fam: &F,
    seed: &[f64],
    exact_seed: &[Option<Q>],
    signs: &[i8],
    cfg: &NewtonConfig,
) -> Result<Vec<Q>> {
    if signs.len() != fam.rows() {
        return Err(Error::DimensionMismatch {
            expected: fam.rows(),
            got: signs.len(),
        });
    }
    if let Some(xq) = exact_seed.iter().cloned().collect::<Option<Vec<Q>>>() {
        if let Ok(v) = fam.eval_exact(&xq) {
            if signs_match(&v, signs) {
                return Ok(xq);
            }
        }
    }
    let sigma = fam.scale_f64(seed);
    for &eps in &cfg.eps_ladder {
        let y: Vec<f64> = signs
            .iter()
            .zip(&sigma)
            .map(|(&s, &sc)| eps * sc * f64::from(s))
            .collect();
        let Some(x) = newton_float(fam, seed, &y, cfg) else {
            continue;
        };
        if fam
            .eval_f64(&x)
            .iter()
            .zip(signs)
            .any(|(v, &s)| s != 0 && sign_of(*v) != s)
        {
            continue;
        }
        for den in [cfg.max_denominator, cfg.max_denominator.saturating_mul(1000)] {
            let xq = rationalize(&x, exact_seed, den);
            if let Some(sol) = solve_zero_rows(fam, &xq, signs) {
                if sol.iter().all(Signed::is_positive) {
                    return Ok(sol);
                }
            }
        }
    }
    Err(Error::Newton(format!(
        "no certified point for sign pattern {signs:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Bracket;
    use crate::linalg::unit;
    use crate::nice::system::{diagonal_ricci_system, SystemMode};
    use crate::rational::qr;

    fn filiform_system(n: usize) -> PolynomialSystem {
        let b: Vec<Bracket> = (1..n - 1).map(|i| Bracket::new(0, i, vec![(i + 1, q(1))])).collect();
        let alg = LieAlgebra::new(n, &b).unwrap();
        let mut order = vec![n - 1];
        order.extend(2..n - 1);
        order.extend([0, 1]);
        let basis =
            RationalMatrix::from_columns(n, &order.iter().map(|&i| unit(n, i)).collect::<Vec<_>>()).unwrap();
        diagonal_ricci_system(&alg, &basis, SystemMode::Strict).unwrap()
    }

    #[test]
    fn roots_of_small_polynomials() {
        assert_eq!(positive_roots(&[q(-2), q(4)]), vec![qr(1, 2)]);
        // t² - 3t + 2
        let mut r = positive_roots(&[q(2), q(-3), q(1)]);
        r.sort();
        assert_eq!(r, vec![q(1), q(2)]);
        assert!(positive_roots(&[q(-2), q(0), q(1)]).is_empty());
    }

    #[test]
    fn rational_fit_recovers_function() {
        let f = |t: &Q| Some((t * t - q(2)) / (t + q(3)));
        let (num, den) = fit_univariate_rational(f).unwrap();
        let t = qr(5, 11);
        assert_eq!(horner(&num, &t) / horner(&den, &t), f(&t).unwrap());
    }

    #[test]
    fn filiform_all_patterns() {
        let sys = filiform_system(6);
        let seed = vec![1.0; 6];
        let exact: Vec<Option<Q>> = vec![Some(q(1)); 6];
        let cfg = NewtonConfig::default();
        for s in [[1i8, -1, 0], [0, 0, 0], [-1, -1, -1], [0, 1, 0], [1, 1, 1]] {
            let x = newton_realize(&sys, &seed, &exact, &s, &cfg).unwrap();
            let v = sys.eval(&x);
            assert!(signs_match(&v, &s), "{s:?} -> {v:?}");
        }
    }
}
