use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use orbit_ltl::ltl::{parse, Formula};
use orbit_ltl::numeric::algebraic::{alg_add, alg_mul, alg_sign, poly_real_roots, AlgebraicNumber};
use orbit_ltl::numeric::interval::RInterval;
use orbit_ltl::numeric::poly::{IntPolynomial, QPoly};
use orbit_ltl::numeric::rational::{rat, Rational};
use orbit_ltl::numeric::roots::count_real_roots;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
}

fn int_poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-9i64..10, 1..7).prop_map(|c| IntPolynomial::from_i64(&c))
}

fn qpoly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(rational(), 1..6).prop_map(QPoly::new)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        Just(Formula::atom("P")),
        Just(Formula::atom("Q")),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::finally),
            inner.clone().prop_map(Formula::globally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::release(a, b)),
            (0u32..20, inner.clone(), inner.clone()).prop_map(|(k, a, b)| Formula::bounded_until(k, a, b)),
            (0u32..20, inner.clone(), inner).prop_map(|(k, a, b)| Formula::bounded_release(k, a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interval_evaluation_encloses(p in int_poly(), a in rational(), w in 0i64..5) {
        let hi = &a + rat(w, 3);
        let box_ = p.eval_interval(&RInterval::new(a.clone(), hi.clone()));
        let mid = (&a + &hi) / rat(2, 1);
        for x in [a, hi, mid] {
            prop_assert!(box_.contains(&p.eval(&x)));
        }
    }

    #[test]
    fn division_with_remainder(a in qpoly(), d in qpoly()) {
        prop_assume!(!d.is_zero());
        let (q, r) = a.divrem(&d);
        prop_assert_eq!(q.mul(&d).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }

    #[test]
    fn gcd_divides_both(a in qpoly(), b in qpoly(), c in qpoly()) {
        prop_assume!(!c.is_zero());
        let (x, y) = (a.mul(&c), b.mul(&c));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let g = x.gcd(&y);
        prop_assert!(x.rem(&g).is_zero() && y.rem(&g).is_zero());
        prop_assert!(g.degree() >= c.degree());
    }

    #[test]
    fn squaring_keeps_real_roots(p in int_poly()) {
        prop_assume!(p.degree() > 0);
        prop_assert_eq!(count_real_roots(&p.mul(&p)), count_real_roots(&p));
    }

    #[test]
    fn integer_roots_are_recovered(mut roots in prop::collection::btree_set(-12i64..12, 1..6)) {
        let mut p = IntPolynomial::from_i64(&[1]);
        for r in &roots {
            p = p.mul(&IntPolynomial::from_i64(&[-r, 1]));
        }
        let got: Vec<Rational> = poly_real_roots(&p)
            .unwrap()
            .iter()
            .map(|a| a.as_rational().expect("rational root"))
            .collect();
        let want: Vec<Rational> = std::mem::take(&mut roots).into_iter().map(|r| rat(r, 1)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn rational_algebraic_arithmetic(a in rational(), b in rational()) {
        let (x, y) = (AlgebraicNumber::from_rational(a.clone()), AlgebraicNumber::from_rational(b.clone()));
        prop_assert_eq!(alg_add(&x, &y).as_rational(), Some(&a + &b));
        prop_assert_eq!(alg_mul(&x, &y).as_rational(), Some(&a * &b));
        let s = alg_sign(&x).unwrap();
        prop_assert_eq!(s, if a.is_zero() { 0 } else if a.is_positive() { 1 } else { -1 });
    }

    #[test]
    fn sqrt_two_sum(k in 1i64..6) {
        // k·√2 · k·√2 = 2k²
        let r = poly_real_roots(&IntPolynomial::from_i64(&[-2 * k * k, 0, 1])).unwrap();
        let sq = alg_mul(&r[1], &r[1]);
        prop_assert_eq!(sq.as_rational(), Some(Rational::from_integer(BigInt::from(2 * k * k))));
        prop_assert_eq!(alg_add(&r[0], &r[1]).as_rational(), Some(Rational::zero()));
    }

    #[test]
    fn formulas_print_and_parse_back(f in formula()) {
        let (g, table) = parse(&f.to_string()).unwrap();
        prop_assert!(table.is_empty());
        prop_assert_eq!(g, f);
    }
}
