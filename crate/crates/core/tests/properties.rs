//! Randomized invariants.

use proptest::prelude::*;

use ncdr_core::cochain::{coboundary, Cochain};
use ncdr_core::findim::standard::{free_xy, truncated_poly};
use ncdr_core::findim::FinDimAlgebra;
use ncdr_core::forms::{add_term, axpy, Calculus, Form};
use ncdr_core::gm::{gm_flatness, Relative, RelativeFamily};
use ncdr_core::linalg::{LinMap, SVec};
use ncdr_core::poly::{parse_ncpoly, GeneratorSet, NCPoly};
use ncdr_core::scalar::{parse_q, Q};
use rand::SeedableRng;

fn algebras() -> [FinDimAlgebra; 2] {
    [truncated_poly(3), free_xy(3)]
}

/// A random reduced form of degree `n`, coefficients in -3..=3.
fn form(c: &Calculus, n: usize, picks: &[(usize, i64)]) -> Form {
    let basis = c.reduced_basis(n);
    let mut f = Form::new();
    if basis.is_empty() {
        return f;
    }
    for &(i, x) in picks {
        add_term(&mut f, basis[i % basis.len()].clone(), Q::from(x));
    }
    f
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..10_000, -3i64..=3), 1..6)
}

fn diff(a: &Form, b: &Form) -> Form {
    let mut r = a.clone();
    axpy(&mut r, &Q::from(-1), b);
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squares_vanish(alg in 0usize..2, n in 0usize..3, p in picks()) {
        let a = &algebras()[alg];
        let c = Calculus::new(a);
        let f = form(&c, n, &p);
        prop_assert!(c.d(&c.d(&f)).is_empty());
        prop_assert!(c.b(&c.b(&f)).is_empty());
        prop_assert!(c.connes_b(&c.connes_b(&f)).is_empty());
        let mut bb = c.b(&c.connes_b(&f));
        axpy(&mut bb, &Q::from(1), &c.connes_b(&c.b(&f)));
        prop_assert!(bb.is_empty());
    }

    #[test]
    fn karoubi_operator(alg in 0usize..2, n in 0usize..3, p in picks()) {
        let a = &algebras()[alg];
        let c = Calculus::new(a);
        let f = form(&c, n, &p);
        let mut lhs = c.b(&c.d(&f));
        axpy(&mut lhs, &Q::from(1), &c.d(&c.b(&f)));
        prop_assert_eq!(lhs, diff(&f, &c.kappa(&f)));
    }

    #[test]
    fn d_is_a_derivation(alg in 0usize..2, n in 0usize..2, m in 0usize..2, p in picks(), q in picks()) {
        let a = &algebras()[alg];
        let c = Calculus::new(a);
        let f = form(&c, n, &p);
        let g = form(&c, m, &q);
        let mut rhs = c.mul_forms(&c.d(&f), &g);
        let sign = if n % 2 == 0 { Q::from(1) } else { Q::from(-1) };
        axpy(&mut rhs, &sign, &c.mul_forms(&f, &c.d(&g)));
        prop_assert_eq!(c.d(&c.mul_forms(&f, &g)), rhs);
    }

    #[test]
    fn iota_kills_karoubi_defect(alg in 0usize..2, n in 1usize..4, p in picks()) {
        let a = &algebras()[alg];
        let c = Calculus::new(a);
        let f = form(&c, n, &p);
        let i = c.iota_delta_fast(&f);
        prop_assert_eq!(c.kappa(&i), i);
    }

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>(), p in 0usize..3, k in 1usize..3) {
        let a = truncated_poly(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = Cochain::random(a.dim(), p, k, (1, 2), &mut rng);
        prop_assert!(coboundary(&a, &coboundary(&a, &f)).is_zero());
    }

    #[test]
    fn rank_nullity(cols in prop::collection::vec(prop::collection::vec((0usize..6, -4i64..=4), 0..5), 1..7)) {
        let cols: Vec<SVec> = cols
            .into_iter()
            .map(|c| {
                let mut v = SVec::new();
                for (i, x) in c {
                    ncdr_core::linalg::add_entry(&mut v, i, Q::from(x));
                }
                v
            })
            .collect();
        let m = LinMap::new(cols.len(), 6, cols);
        let ker = m.kernel();
        prop_assert_eq!(ker.len() + m.rank(), m.dom);
        for k in &ker {
            prop_assert!(m.apply(k).is_empty());
        }
        // every image vector is solvable
        let b = m.apply(&(0..m.dom).map(|i| (i, Q::from(i as i64 + 1))).collect());
        let x = m.solve(&b);
        prop_assert!(x.is_some());
        prop_assert_eq!(m.apply(&x.unwrap()), b);
    }

    #[test]
    fn polynomial_product_is_associative(ws in prop::collection::vec((prop::collection::vec(0usize..2, 0..3), -3i64..=3), 3..9)) {
        let mut ps = [NCPoly::zero(), NCPoly::zero(), NCPoly::zero()];
        for (i, (w, c)) in ws.into_iter().enumerate() {
            ps[i % 3].add_term(w, Q::from(c));
        }
        let [x, y, z] = ps;
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        let g = GeneratorSet::plain(&["x", "y"]);
        prop_assert_eq!(parse_ncpoly(&x.to_string(&g), &g).unwrap(), x);
    }

    #[test]
    fn rationals_print_and_parse(n in -1000i64..1000, d in 1i64..50) {
        let x = Q::from(n) * Q::from(d).recip();
        prop_assert_eq!(parse_q(&x.to_string()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn connection_checks_hold_at_any_seed(seed in any::<u64>()) {
        let rel = Relative::build(&RelativeFamily::weyl(4)).unwrap();
        let r = gm_flatness(&rel, 2, seed, false);
        prop_assert!(r.suite.passed(), "{:?}", r.suite.failures());
        let rel = Relative::build(&RelativeFamily::trivial(4)).unwrap();
        let r = gm_flatness(&rel, 2, seed, true);
        prop_assert!(r.suite.passed(), "{:?}", r.suite.failures());
    }
}
