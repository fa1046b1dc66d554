use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use orbit_ltl::ltl::{parse_predicate, Formula};
use orbit_ltl::numeric::rational::{rat, Rational};
use orbit_ltl::oracle::OrbitOracle;
use orbit_ltl::semilinear::{
    build_lasso, decide_periodic, lasso_mc, real_case_spec, rou_case_spec, specs_for, EventuallyPeriodicSpec,
    LassoWord,
};
use orbit_ltl::spectral::{closed_form, spectrum, RationalMatrix3};
use orbit_ltl::Error;
use proptest::prelude::*;

fn diag(a: Rational, b: Rational, c: Rational) -> RationalMatrix3 {
    let z = || rat(0, 1);
    RationalMatrix3::from_rows(vec![vec![a, z(), z()], vec![z(), b, z()], vec![z(), z(), c]]).unwrap()
}

fn ones() -> Vec<Rational> {
    vec![rat(1, 1), rat(1, 1), rat(1, 1)]
}

fn real_spec(m: &RationalMatrix3, s: &[Rational], pred: &str) -> EventuallyPeriodicSpec {
    let spec = spectrum(m);
    let orbit = closed_form(m, s, &spec);
    real_case_spec(&parse_predicate("T", pred).unwrap(), &orbit).unwrap()
}

/// Exact truth agrees with the periodic description on `(N, N + 10P]` and beyond up to `extra`.
fn assert_honest(m: &RationalMatrix3, s: &[Rational], pred: &str, sp: &EventuallyPeriodicSpec, extra: u64) {
    let o = OrbitOracle::new(m, s, vec![parse_predicate("T", pred).unwrap()]);
    let n = sp.threshold.to_u64().unwrap();
    let end = (n + 10 * sp.period as u64).max(extra);
    for i in n + 1..=end {
        assert_eq!(o.holds(0, i), sp.predicts(i), "n = {}", i);
    }
}

#[test]
fn growing_coordinate_eventually_true() {
    let m = diag(rat(2, 1), rat(1, 2), rat(1, 3));
    let sp = real_spec(&m, &ones(), "x1 - 10 > 0");
    assert_eq!(sp.residues.iter().copied().collect::<Vec<_>>(), vec![0, 1]);
    assert!(sp.threshold >= BigInt::from(3));
    assert_honest(&m, &ones(), "x1 - 10 > 0", &sp, 100);
}

#[test]
fn negative_eigenvalue_gives_parity() {
    let m = diag(rat(-2, 1), rat(1, 2), rat(1, 3));
    let sp = real_spec(&m, &ones(), "x1 > 0");
    assert_eq!(sp.period, 2);
    assert_eq!(sp.residues.iter().copied().collect::<Vec<_>>(), vec![0]);
    assert_honest(&m, &ones(), "x1 > 0", &sp, 100);
}

#[test]
fn constant_predicate() {
    let m = diag(rat(-2, 1), rat(1, 2), rat(1, 3));
    let sp = real_spec(&m, &ones(), "0*x1 + 1 > 0");
    assert_eq!(sp.residues.len(), 2);
    assert_eq!(sp.threshold, BigInt::from(0));
    let sp = real_spec(&m, &ones(), "x1 - x1 > 0");
    assert!(sp.residues.is_empty());
}

#[test]
fn cancelling_parity_terms() {
    // x1 + x2 = 2^n + (-2)^n vanishes at odd n
    let m = diag(rat(2, 1), rat(-2, 1), rat(1, 3));
    let s = ones();
    for pred in ["x1 + x2 > 0", "x1 + x2 >= 0", "x1 + x2 - x3 > 0"] {
        let sp = real_spec(&m, &s, pred);
        assert_honest(&m, &s, pred, &sp, 60);
    }
}

#[test]
fn jordan_block_and_polynomial_coefficients() {
    let m = RationalMatrix3::from_rows(vec![
        vec![rat(1, 1), rat(1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(3, 2)],
    ])
    .unwrap();
    let s = vec![rat(-40, 1), rat(1, 1), rat(1, 1)];
    for pred in ["x1 > 0", "x1^2 - 5*x3 > 0", "x3 - 1000*x1 >= 0"] {
        let sp = real_spec(&m, &s, pred);
        assert_honest(&m, &s, pred, &sp, 80);
    }
}

#[test]
fn quarter_turn_with_growth() {
    let m = RationalMatrix3::from_rows(vec![
        vec![rat(0, 1), rat(-2, 1), rat(0, 1)],
        vec![rat(2, 1), rat(0, 1), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 2)],
    ])
    .unwrap();
    let s = vec![rat(1, 1), rat(0, 1), rat(1, 1)];
    let pred = parse_predicate("T", "x1 >= 0").unwrap();
    let sp = rou_case_spec(&pred, &m, &s, 4).unwrap();
    assert_eq!(sp.period, 8);
    // x1(n) = 2^n cos(nπ/2) + 0: nonnegative off n ≡ 2 (mod 4)
    let want: Vec<u32> = (0..8).filter(|r| r % 4 != 2).collect();
    assert_eq!(sp.residues.iter().copied().collect::<Vec<_>>(), want);
    assert_honest(&m, &s, "x1 >= 0", &sp, 200);
    assert!(matches!(rou_case_spec(&pred, &m, &s, 3), Err(Error::WrongRegime(_))));
}

#[test]
fn sixth_turn_rotation() {
    // rotation by π/3 scaled by 1, plus a decaying coordinate
    let m = RationalMatrix3::from_rows(vec![
        vec![rat(1, 2), rat(-3, 4), rat(0, 1)],
        vec![rat(1, 1), rat(1, 2), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 3)],
    ])
    .unwrap();
    let spec = spectrum(&m);
    assert_eq!(spec.rou_order_exact(), Some(6));
    let s = vec![rat(1, 1), rat(1, 1), rat(1, 1)];
    for pred in ["x1 > 0", "x1 + x3 >= 0", "x1*x2 - x3 > 0"] {
        let sp = rou_case_spec(&parse_predicate("T", pred).unwrap(), &m, &s, 6).unwrap();
        assert_eq!(sp.period, 12);
        assert_honest(&m, &s, pred, &sp, 200);
    }
}

#[test]
fn identity_is_not_rotation() {
    let pred = parse_predicate("T", "x1 > 0").unwrap();
    let r = rou_case_spec(&pred, &RationalMatrix3::identity(), &ones(), 4);
    assert!(matches!(r, Err(Error::WrongRegime(_))));
}

#[test]
fn lasso_from_oracle() {
    let m = diag(rat(-2, 1), rat(1, 2), rat(1, 3));
    let preds = vec![
        parse_predicate("A", "x2 + x3 > 0").unwrap(),
        parse_predicate("B", "x1 > 0").unwrap(),
    ];
    let o = OrbitOracle::new(&m, &ones(), preds);
    let specs = specs_for(&m, &ones(), &o).unwrap();
    let w = build_lasso(&specs, &o).unwrap();
    assert_eq!(w.period, 2);
    assert!(w.cycle.iter().all(|r| r[0]));
    let parities: Vec<bool> = w.cycle.iter().map(|r| r[1]).collect();
    let first = w.threshold + 1;
    assert_eq!(parities[0], first.is_multiple_of(2));
    assert_ne!(parities[0], parities[1]);
}

#[test]
fn wrong_spec_is_reported() {
    let m = diag(rat(-2, 1), rat(1, 2), rat(1, 3));
    let o = OrbitOracle::new(&m, &ones(), vec![parse_predicate("B", "x1 > 0").unwrap()]);
    let bad = EventuallyPeriodicSpec {
        threshold: BigInt::from(0),
        period: 2,
        residues: [0, 1].into_iter().collect(),
    };
    assert!(matches!(build_lasso(&[bad], &o), Err(Error::SpecViolation { .. })));
}

#[test]
fn lcm_of_periods() {
    let m = RationalMatrix3::from_rows(vec![
        vec![rat(0, 1), rat(-2, 1), rat(0, 1)],
        vec![rat(2, 1), rat(0, 1), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 2)],
    ])
    .unwrap();
    let o = OrbitOracle::new(&m, &ones(), vec![parse_predicate("T", "x1 >= 0").unwrap()]);
    let mut specs = specs_for(&m, &ones(), &o).unwrap();
    specs.push(specs[0].clone());
    specs[1].period = 2;
    specs[1].residues = [0, 1].into_iter().collect();
    let o2 = OrbitOracle::new(
        &m,
        &ones(),
        vec![parse_predicate("T", "x1 >= 0").unwrap(), parse_predicate("U", "x1^2 >= 0").unwrap()],
    );
    assert_eq!(build_lasso(&specs, &o2).unwrap().period, 8);
}

#[test]
fn end_to_end_parity() {
    let m = diag(rat(-2, 1), rat(1, 2), rat(1, 3));
    let (f, inline) = orbit_ltl::ltl::parse("G (x1 > 0)").unwrap();
    let o = OrbitOracle::new(&m, &ones(), inline.into_values().collect());
    let (v, _, _) = decide_periodic(&m, &ones(), &f, &o).unwrap();
    assert!(!v);
    let (f, inline) = orbit_ltl::ltl::parse("G F (x1 > 0) & G F (x1 < 0)").unwrap();
    let o = OrbitOracle::new(&m, &ones(), inline.into_values().collect());
    assert!(decide_periodic(&m, &ones(), &f, &o).unwrap().0);
}

fn formula_strategy(bounded_only: bool) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::atom("P")), Just(Formula::atom("Q")), Just(Formula::True)];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let b = 0u32..6;
        let mut v = vec![
            inner.clone().prop_map(Formula::not).boxed(),
            inner.clone().prop_map(Formula::next).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)).boxed(),
            (b.clone(), inner.clone(), inner.clone())
                .prop_map(|(n, a, c)| Formula::bounded_until(BigUint::from(n), a, c))
                .boxed(),
            (b, inner.clone(), inner.clone())
                .prop_map(|(n, a, c)| Formula::bounded_release(BigUint::from(n), a, c))
                .boxed(),
        ];
        if !bounded_only {
            v.push((inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)).boxed());
            v.push((inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::release(a, b)).boxed());
            v.push(inner.clone().prop_map(Formula::finally).boxed());
            v.push(inner.prop_map(Formula::globally).boxed());
        }
        proptest::strategy::Union::new(v)
    })
}

fn word_strategy() -> impl Strategy<Value = LassoWord> {
    let row = || proptest::collection::vec(any::<bool>(), 2);
    (proptest::collection::vec(row(), 1..5), proptest::collection::vec(row(), 1..4))
        .prop_map(|(p, c)| LassoWord::new(vec!["P".into(), "Q".into()], p, c))
}

/// Direct evaluation along positions; only for formulas without unbounded
/// temporal operators.
fn brute(w: &LassoWord, f: &Formula, n: u64) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => w.at(n)[w.atoms.iter().position(|x| x == a).unwrap()],
        Formula::Not(g) => !brute(w, g, n),
        Formula::And(a, b) => brute(w, a, n) && brute(w, b, n),
        Formula::Or(a, b) => brute(w, a, n) || brute(w, b, n),
        Formula::Next(g) => brute(w, g, n + 1),
        Formula::BoundedUntil(b, f1, f2) => {
            for i in 0..=b.to_u64().unwrap() {
                if brute(w, f2, n + i) {
                    return true;
                }
                if !brute(w, f1, n + i) {
                    return false;
                }
            }
            false
        }
        Formula::BoundedRelease(b, f1, f2) => {
            for i in 0..=b.to_u64().unwrap() {
                if !brute(w, f2, n + i) {
                    return false;
                }
                if brute(w, f1, n + i) {
                    return true;
                }
            }
            true
        }
        _ => unreachable!(),
    }
}

fn unrolled(w: &LassoWord, times: usize) -> LassoWord {
    let cycle: Vec<Vec<bool>> = (0..times).flat_map(|_| w.cycle.clone()).collect();
    LassoWord::new(w.atoms.clone(), w.prefix.clone(), cycle)
}

fn rotated(w: &LassoWord) -> LassoWord {
    // move the first cycle letter into the prefix
    let mut prefix = w.prefix.clone();
    prefix.push(w.cycle[0].clone());
    let mut cycle = w.cycle[1..].to_vec();
    cycle.push(w.cycle[0].clone());
    LassoWord::new(w.atoms.clone(), prefix, cycle)
}

proptest! {
    #[test]
    fn bounded_formulas_match_direct_evaluation(w in word_strategy(), f in formula_strategy(true)) {
        for at in 0..4 {
            prop_assert_eq!(lasso_mc(&w, &f, at).unwrap(), brute(&w, &f, at));
        }
    }

    #[test]
    fn stable_under_unrolling_and_rotation(w in word_strategy(), f in formula_strategy(false)) {
        let v = lasso_mc(&w, &f, 0).unwrap();
        prop_assert_eq!(v, lasso_mc(&unrolled(&w, 3), &f, 0).unwrap());
        prop_assert_eq!(v, lasso_mc(&rotated(&w), &f, 0).unwrap());
    }
}
