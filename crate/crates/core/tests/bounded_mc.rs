use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use orbit_ltl::bounded_mc::{
    boundify, check, membership_oracle, model_check_bounded, uniform_certificates, Answer, BoundMode, BoundedChecker,
    CheckConfig,
};
use orbit_ltl::ltl::{parse, parse_predicate, parse_with, Formula, PredicateTable};
use orbit_ltl::numeric::rational::{pi_interval, rat, Rational};
use orbit_ltl::oracle::OrbitOracle;
use orbit_ltl::spectral::{spectrum, RationalMatrix3};
use orbit_ltl::torus::{return_bound_from, Torus};
use orbit_ltl::Error;
use proptest::prelude::*;

fn rotation_scale() -> RationalMatrix3 {
    RationalMatrix3::from_rows(vec![
        vec![rat(3, 5), rat(-4, 5), rat(0, 1)],
        vec![rat(4, 5), rat(3, 5), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 2)],
    ])
    .unwrap()
}

fn diag(a: Rational, b: Rational, c: Rational) -> RationalMatrix3 {
    let z = || rat(0, 1);
    RationalMatrix3::from_rows(vec![vec![a, z(), z()], vec![z(), b, z()], vec![z(), z(), c]]).unwrap()
}

fn run(m: &RationalMatrix3, s: &[Rational], text: &str, cfg: &CheckConfig) -> orbit_ltl::Result<orbit_ltl::bounded_mc::Verdict> {
    let (f, preds) = parse(text)?;
    check(m, s, &f, &preds, cfg)
}

fn cfg(mode: BoundMode, horizon: u64) -> CheckConfig {
    CheckConfig {
        mode,
        horizon,
        ..CheckConfig::default()
    }
}

#[test]
fn oracle_examples() {
    let x1 = parse_predicate("T", "x1 > 0").unwrap();
    let s = vec![rat(1, 1), rat(0, 1), rat(0, 1)];
    assert!(membership_oracle(&RationalMatrix3::identity(), &s, 17, &x1));
    let m = diag(rat(-2, 1), rat(1, 1), rat(1, 1));
    assert!(!membership_oracle(&m, &[rat(1, 1), rat(1, 1), rat(1, 1)], 3, &x1));
    let ge = parse_predicate("T", "x1 >= 0").unwrap();
    let s = vec![rat(1, 1), rat(0, 1), rat(1, 1)];
    assert!(!membership_oracle(&rotation_scale(), &s, 2, &ge));
    assert_eq!(OrbitOracle::point(&rotation_scale(), &s, 2)[0], rat(-7, 25));
}

#[test]
fn return_bound_for_sixth_of_circle() {
    // an arc of length π/3 with ‖γ‖^D = 2
    let l = pi_interval(64).lo / Rational::from_integer(BigInt::from(3));
    assert_eq!(return_bound_from(&l, &BigUint::from(2u32)).unwrap(), BigInt::from(227));
}

#[test]
fn boundify_structure() {
    let (f, _) = parse("a & X b").unwrap();
    assert_eq!(boundify(&f, &[]).unwrap(), f);
    let (f, _) = parse("(a U b) U c").unwrap();
    let certs = uniform_certificates(&f, 227, BoundMode::Empirical);
    assert_eq!(certs.len(), 2);
    let g = boundify(&f, &certs).unwrap();
    assert_eq!(g.to_string(), "((a U[227] b) U[227] c)");
    assert!(matches!(boundify(&f, &certs[..1]), Err(Error::MissingCertificate(1))));
}

#[test]
fn periodic_regimes() {
    let ones = vec![rat(1, 1), rat(1, 1), rat(1, 1)];
    let v = run(&RationalMatrix3::identity(), &ones, "G (x1 > 0)", &CheckConfig::default()).unwrap();
    assert_eq!(v.verdict, Answer::True);
    assert!(v.rigor);
    let m = diag(rat(-2, 1), rat(1, 2), rat(1, 3));
    let v = run(&m, &ones, "G F (x1 > 0)", &CheckConfig::default()).unwrap();
    assert_eq!(v.verdict, Answer::True);
    assert_eq!(v.lasso.as_ref().unwrap().period, 2);
    let v = run(&m, &ones, "G (x1 > 0)", &CheckConfig::default()).unwrap();
    assert_eq!(v.verdict, Answer::False);
}

#[test]
fn dense_rotation_enters_arc() {
    let s = vec![rat(1, 1), rat(0, 1), rat(0, 1)];
    let v = run(&rotation_scale(), &s, "F (x1 >= 1)", &cfg(BoundMode::Empirical, 10_000)).unwrap();
    assert_eq!(v.verdict, Answer::True);
    assert!(!v.rigor);
    let v = run(&rotation_scale(), &s, "X F (x1 >= 99/100)", &cfg(BoundMode::Empirical, 2_000)).unwrap();
    assert_eq!(v.verdict, Answer::True);
}

#[test]
fn interval_mode_matches_empirical() {
    let s = vec![rat(1, 1), rat(0, 1), rat(1, 1)];
    let cases = [
        ("G F (x1 > 0)", Answer::True),
        ("F G (x1 > 0)", Answer::False),
        ("G (x1 + 2 > 0)", Answer::True),
        ("(x2 >= 0) U (x1 < 0)", Answer::True),
        ("(x2 > 0) U (x2 < 0)", Answer::False),
        ("(x1 > 0) U (x2 > 0)", Answer::True),
        ("G ((x1 > 0) -> F (x1 < 0))", Answer::True),
        ("F (x1 > 0 & x2 > 0 & X (x1 < 0))", Answer::True),
    ];
    for (text, want) in cases {
        let v = run(&rotation_scale(), &s, text, &cfg(BoundMode::IntervalDerived, 300)).unwrap();
        assert_eq!(v.verdict, want, "{} (interval)", text);
        assert!(!v.bounds.is_empty());
        let e = run(&rotation_scale(), &s, text, &cfg(BoundMode::Empirical, 300)).unwrap();
        assert_eq!(e.verdict, want, "{} (empirical)", text);
    }
}

#[test]
fn rigorous_mode_reports_certificates() {
    let s = vec![rat(1, 1), rat(0, 1), rat(1, 1)];
    let v = run(&rotation_scale(), &s, "F (x1 < 0)", &cfg(BoundMode::Rigorous, 300)).unwrap();
    assert_eq!(v.verdict, Answer::True);
    assert!(v.rigor);
    assert_eq!(v.bounds.len(), 1);
    assert!(v.bounds[0].bound.starts_with("2^"));
    // confirming G needs the full bound, which is out of reach
    let small = CheckConfig {
        max_position: 2_000,
        ..cfg(BoundMode::Rigorous, 300)
    };
    let v = run(&rotation_scale(), &s, "G (x1 + 2 > 0)", &small).unwrap();
    assert_eq!(v.verdict, Answer::Inconclusive);
    assert!(!v.rigor);
}

#[test]
fn stable_under_larger_bounds() {
    let s = vec![rat(1, 1), rat(0, 1), rat(1, 1)];
    for text in ["G F (x1 > 0)", "(x1 > 0) U (x2 > 0)", "F G (x1 > 0)"] {
        let (f, preds) = parse(text).unwrap();
        let v = check(&rotation_scale(), &s, &f, &preds, &cfg(BoundMode::IntervalDerived, 300)).unwrap();
        let (g, table) = orbit_ltl::ltl::to_negation_free(&f, &preds).unwrap();
        let o = OrbitOracle::new(&rotation_scale(), &s, table.values().cloned().collect());
        let mut bumped = v.bounds.clone();
        for c in &mut bumped {
            c.value = Some(c.value.clone().unwrap() + 50u32);
        }
        let b = boundify(&g, &bumped).unwrap();
        let again = model_check_bounded(&b, 0, &o, 100_000).unwrap();
        assert_eq!(Answer::from(again), v.verdict, "{}", text);
    }
}

#[test]
fn root_of_unity_is_rejected_by_rotation_engine() {
    let m = RationalMatrix3::from_rows(vec![
        vec![rat(0, 1), rat(-2, 1), rat(0, 1)],
        vec![rat(2, 1), rat(0, 1), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 2)],
    ])
    .unwrap();
    let g = spectrum(&m).gamma().unwrap();
    assert!(matches!(Torus::new(g), Err(Error::WrongRegime(_))));
    // the lasso verdict agrees with a plain bounded scan
    let s = vec![rat(1, 1), rat(0, 1), rat(1, 1)];
    for text in ["X X (x1 < 0)", "(x1 >= 0) U[5] (x2 > 0)", "(x2 >= 0) R[9] (x1 > -100)"] {
        let (f, preds) = parse(text).unwrap();
        let v = check(&m, &s, &f, &preds, &CheckConfig::default()).unwrap();
        let o = OrbitOracle::new(&m, &s, preds.values().cloned().collect());
        assert_eq!(Answer::from(model_check_bounded(&f, 0, &o, 1000).unwrap()), v.verdict, "{}", text);
    }
}

#[test]
fn named_predicates() {
    let mut preds = PredicateTable::new();
    preds.insert("P".into(), parse_predicate("P", "x1 - 10 > 0").unwrap());
    let (f, preds) = parse_with("F G P", &preds).unwrap();
    let m = diag(rat(2, 1), rat(1, 2), rat(1, 3));
    let v = check(&m, &[rat(1, 1), rat(1, 1), rat(1, 1)], &f, &preds, &CheckConfig::default()).unwrap();
    assert_eq!(v.verdict, Answer::True);
    assert_eq!(v.regime, "three-real");
}

fn bounded_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::atom("P")), Just(Formula::atom("Q")), Just(Formula::False)];
    leaf.prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::next),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (0u32..5, inner.clone(), inner.clone())
                .prop_map(|(n, a, b)| Formula::bounded_until(BigUint::from(n), a, b)),
            (0u32..5, inner.clone(), inner).prop_map(|(n, a, b)| Formula::bounded_release(BigUint::from(n), a, b)),
        ]
    })
}

/// Direct semantics without memoisation or early exits.
fn reference(f: &Formula, w: &[(bool, bool)], n: usize) -> bool {
    match f {
        Formula::False => false,
        Formula::True => true,
        Formula::Atom(a) => if a == "P" { w[n].0 } else { w[n].1 },
        Formula::Next(g) => reference(g, w, n + 1),
        Formula::And(a, b) => reference(a, w, n) & reference(b, w, n),
        Formula::Or(a, b) => reference(a, w, n) | reference(b, w, n),
        Formula::BoundedUntil(k, a, b) => {
            let k = k.to_usize().unwrap();
            (0..=k).any(|j| reference(b, w, n + j) && (0..j).all(|i| reference(a, w, n + i)))
        }
        Formula::BoundedRelease(k, a, b) => {
            let k = k.to_usize().unwrap();
            (0..=k).all(|j| reference(b, w, n + j) || (0..j).any(|i| reference(a, w, n + i)))
        }
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn checker_matches_reference(f in bounded_formula(), w in proptest::collection::vec(any::<(bool, bool)>(), 40)) {
        let rows: Vec<Vec<(String, bool)>> =
            w.iter().map(|&(p, q)| vec![("P".into(), p), ("Q".into(), q)]).collect();
        let memo = model_check_bounded(&f, 0, rows.as_slice(), 39).unwrap();
        let plain = BoundedChecker::new(&f, rows.as_slice(), 39).unwrap().without_memo().check(0).unwrap();
        prop_assert_eq!(memo, plain);
        prop_assert_eq!(memo, reference(&f, &w, 0));
    }
}
