use nalgebra::DMatrix;
use proptest::prelude::*;

use nilricci::curvature::{ricci_via_curvature, ricci_via_trace_formula};
use nilricci::linalg::inertia;
use nilricci::nice::{diagonal_ricci_system, standard_nice_frame, RealizeConfig, Realizer, SystemMode};
use nilricci::rational::{approximate, q, qr, to_f64};
use nilricci::signature::{check_membership, ricci_signature, sign_set};
use nilricci::{Catalog, CatalogEntry, Metric, RationalMatrix, SignatureTriple, Q};

fn entries() -> &'static [CatalogEntry] {
    Catalog::builtin().entries()
}

fn entry_index() -> impl Strategy<Value = usize> {
    0..entries().len()
}

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| qr(a, b))
}

fn positive_q() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=6).prop_map(|(a, b)| qr(a, b))
}

/// `PᵗP + I` from a 7×7 pool of small integers, cut to size `n`.
fn metric_for(n: usize, pool: &[i64]) -> Metric {
    let p = RationalMatrix::from_fn(n, n, |i, j| q(pool[i * 7 + j]));
    let g = &(&p.transpose() * &p) + &RationalMatrix::identity(n);
    Metric::new(g).unwrap()
}

fn pool() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 49)
}

/// Counts eigenvalue signs of a symmetric matrix in floating point.
fn float_inertia(m: &RationalMatrix) -> SignatureTriple {
    let n = m.rows();
    let a = DMatrix::from_fn(n, n, |i, j| to_f64(&m[(i, j)]));
    let scale = a.amax().max(1.0);
    let ev = a.symmetric_eigen().eigenvalues;
    let tol = 1e-9 * scale;
    SignatureTriple::new(
        ev.iter().filter(|&&x| x < -tol).count(),
        ev.iter().filter(|&&x| x.abs() <= tol).count(),
        ev.iter().filter(|&&x| x > tol).count(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sylvester_invariance(
        entries in prop::collection::vec(small_q(), 15),
        p in prop::collection::vec(-3i64..=3, 25),
    ) {
        let n = 5;
        let mut k = 0;
        let mut a = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                a[(i, j)] = entries[k].clone();
                a[(j, i)] = entries[k].clone();
                k += 1;
            }
        }
        let p = RationalMatrix::from_fn(n, n, |i, j| q(p[i * n + j]));
        prop_assume!(p.rank() == n);
        let s = inertia(&a).unwrap();
        prop_assert_eq!(inertia(&a.congruence(&p)).unwrap(), s);
        prop_assert_eq!(float_inertia(&a), s);
    }

    #[test]
    fn ricci_routes_agree(idx in entry_index(), pool in pool()) {
        let e = &entries()[idx];
        let g = metric_for(e.algebra.dim(), &pool);
        let a = ricci_via_curvature(&e.algebra, &g).unwrap();
        let b = ricci_via_trace_formula(&e.algebra, &g).unwrap();
        prop_assert_eq!(a.ric_form, b.ric_form);
    }

    #[test]
    fn reduction_matches_direct_inertia_and_sign_set(idx in entry_index(), pool in pool()) {
        let e = &entries()[idx];
        let g = metric_for(e.algebra.dim(), &pool);
        let r = ricci_signature(&e.algebra, &g).unwrap();
        prop_assert_eq!(r.signature, r.full_inertia);
        prop_assert_eq!(float_inertia(&r.ric_form), r.signature);
        let m = check_membership(&e.algebra, &g).unwrap();
        prop_assert!(sign_set(m.profile).contains(&r.signature));
    }

    #[test]
    fn ricci_is_semidefinite_on_the_centre(idx in entry_index(), pool in pool()) {
        let e = &entries()[idx];
        let g = metric_for(e.algebra.dim(), &pool);
        let r = ricci_signature(&e.algebra, &g).unwrap();
        let z = e.algebra.center();
        if z.dim() > 0 {
            let zb = RationalMatrix::from_columns(e.algebra.dim(), z.basis()).unwrap();
            let on_z = inertia(&r.ric_form.congruence(&zb)).unwrap();
            prop_assert_eq!(on_z.s_minus, 0);
        }
        let p = e.algebra.dimension_profile().unwrap();
        prop_assert!(r.signature.s_minus <= p.n - p.k);
    }

    #[test]
    fn basis_change_keeps_structure(idx in entry_index(), pool in pool()) {
        let e = &entries()[idx];
        let n = e.algebra.dim();
        let p = RationalMatrix::from_fn(n, n, |i, j| q(pool[i * 7 + j]) + if i == j { q(3) } else { q(0) });
        prop_assume!(p.rank() == n);
        let b = e.algebra.change_basis(&p).unwrap();
        let v = b.validate();
        prop_assert!(v.jacobi_ok && v.nilpotent);
        for i in 0..n {
            for j in 0..n {
                let neg: Vec<Q> = b.basis_bracket(j, i).iter().map(|c| -c).collect();
                prop_assert_eq!(b.basis_bracket(i, j), &neg);
            }
        }
        prop_assert_eq!(b.dimension_profile().unwrap(), e.algebra.dimension_profile().unwrap());
    }

    #[test]
    fn nice_rows_are_homogeneous(idx in entry_index(), t in positive_q(), xs in prop::collection::vec(positive_q(), 7)) {
        let e = &entries()[idx];
        let Some(frame) = e.nice_basis.clone().or_else(|| standard_nice_frame(&e.algebra)) else {
            return Ok(());
        };
        let sys = diagonal_ricci_system(&e.algebra, &frame, SystemMode::Relaxed).unwrap();
        let x: Vec<Q> = xs[..sys.nvars()].to_vec();
        let tx: Vec<Q> = x.iter().map(|v| v * &t).collect();
        for (poly, (fx, ftx)) in sys.polys.iter().zip(sys.eval(&x).iter().zip(sys.eval(&tx))) {
            prop_assert!(poly.is_homogeneous());
            let deg = poly.degrees().first().copied().unwrap_or(0);
            let scale = (0..deg).fold(q(1), |acc, _| acc * &t);
            prop_assert_eq!(ftx, fx * scale);
        }
        // the Ricci values scale like a_i, independently of the cleared denominators
        let g1 = sys.metric_for(&x).unwrap();
        let g2 = sys.metric_for(&tx).unwrap();
        let r1 = ricci_signature(&e.algebra, &g1).unwrap();
        let r2 = ricci_signature(&e.algebra, &g2).unwrap();
        prop_assert_eq!(r1.signature, r2.signature);
    }

    #[test]
    fn single_row_dichotomy(idx in entry_index(), xs in prop::collection::vec(positive_q(), 7)) {
        let e = &entries()[idx];
        let p = e.algebra.dimension_profile().unwrap();
        let Some(frame) = e.nice_basis.clone().or_else(|| standard_nice_frame(&e.algebra)) else {
            return Ok(());
        };
        if p.d - p.ell != 1 {
            return Ok(());
        }
        let sys = diagonal_ricci_system(&e.algebra, &frame, SystemMode::Relaxed).unwrap();
        let x: Vec<Q> = xs[..sys.nvars()].to_vec();
        let (alpha, beta) = sys.two_sided_coefficients(0, &x);
        prop_assert!(alpha > q(0) && beta > q(0));
        let m = sys.rows[0];
        let f = sys.polys[0].eval(&x);
        prop_assume!(f != q(0));
        let lhs = (&alpha * &x[m] * &x[m] - &beta) / f;
        // same sign and a positive monomial ratio
        prop_assert!(lhs > q(0));
        // no bracket [X_j, X_d] has a component along X_d
        let b = e.algebra.change_basis(&frame).unwrap();
        for j in 0..b.dim() {
            prop_assert!(b.basis_bracket(j, m)[m] == q(0));
        }
    }

    #[test]
    fn rationalization_is_close(x in 1e-3f64..1e3) {
        let r = approximate(x, 1_000_000);
        prop_assert!((to_f64(&r) - x).abs() <= x * 1e-9 + 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn realized_certificates_recertify(idx in entry_index(), pick in 0usize..64, seed in 0u64..1000) {
        let e = &entries()[idx];
        let r = Realizer::for_entry(e, RealizeConfig { seed, ..RealizeConfig::default() }).unwrap();
        let targets: Vec<SignatureTriple> = r.sign_set().triples.iter().copied().collect();
        let t = targets[pick % targets.len()];
        if let Some(c) = r.realize(t).unwrap().certificate() {
            let g = c.metric.to_metric(e.algebra.dim()).unwrap();
            prop_assert_eq!(ricci_signature(&e.algebra, &g).unwrap().signature, t);
            let m = check_membership(&e.algebra, &g).unwrap();
            prop_assert_eq!((m.p, m.m), (c.p, c.m));
        } else {
            let p = e.algebra.dimension_profile().unwrap();
            prop_assert!(t.s_minus > p.n - p.k);
        }
    }
}
