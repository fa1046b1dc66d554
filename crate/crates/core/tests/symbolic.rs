use num_bigint::BigInt;
use orbit_ltl::ltl::parse_predicate;
use orbit_ltl::numeric::rational::{rat, Rational};
use orbit_ltl::oracle::OrbitOracle;
use orbit_ltl::spectral::{closed_form, spectrum, RationalMatrix3};
use orbit_ltl::symbolic::{
    aggregate, atomic_intervals, empirical_threshold, normalize, rigorous_threshold, NormalizedExpression,
};
use orbit_ltl::torus::{Torus, TorusPoint, TorusSet};

fn rotation_scale() -> RationalMatrix3 {
    RationalMatrix3::from_rows(vec![
        vec![rat(3, 5), rat(-4, 5), rat(0, 1)],
        vec![rat(4, 5), rat(3, 5), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 2)],
    ])
    .unwrap()
}

struct Setup {
    m: RationalMatrix3,
    s: Vec<Rational>,
    ne: NormalizedExpression,
    torus: Torus,
}

fn setup(m: RationalMatrix3, s: Vec<Rational>, pred: &str) -> Setup {
    let p = parse_predicate("T", pred).unwrap();
    let spec = spectrum(&m);
    let orbit = closed_form(&m, &s, &spec);
    let es = aggregate(&p, &orbit);
    let ne = normalize(&es, &spec).unwrap();
    let torus = Torus::new(spec.gamma().unwrap()).unwrap();
    Setup { m, s, ne, torus }
}

fn check_prediction(st: &Setup, pred: &str, set: &TorusSet, from: u64, to: u64) {
    let o = OrbitOracle::new(&st.m, &st.s, vec![parse_predicate("T", pred).unwrap()]);
    for n in from..=to {
        assert_eq!(st.torus.contains_gamma_power(set, n), o.holds(0, n), "n = {}", n);
    }
}

#[test]
fn normalized_expression_matches_orbit() {
    let st = setup(rotation_scale(), vec![rat(1, 1), rat(0, 1), rat(1, 1)], "x1 > 0");
    let k = &st.ne.field;
    assert_eq!(st.ne.k(), 1);
    assert_eq!(st.ne.betas[1], k.rational(rat(1, 2)));
    assert!(st.ne.betas[0].is_zero());
    // x1 does not see the contracting coordinate
    assert!(st.ne.residual.is_empty());
    for n in 0..=10 {
        let x = OrbitOracle::point(&st.m, &st.s, n);
        assert!(st.ne.eval_enclosure(n, 64).contains(&x[0]), "n = {}", n);
    }
}

#[test]
fn contracting_coordinate_becomes_residual() {
    let st = setup(rotation_scale(), vec![rat(1, 1), rat(0, 1), rat(1, 1)], "x1 + x3 > 0");
    let k = &st.ne.field;
    assert_eq!(st.ne.betas[1], k.rational(rat(1, 2)));
    assert_eq!(st.ne.residual.len(), 1);
    assert_eq!(st.ne.residual[0].coeff, k.rational(rat(1, 1)));
    assert_eq!(st.ne.residual[0].ratio_sq, k.rational(rat(1, 4)));
    for n in 0..=10 {
        let x = OrbitOracle::point(&st.m, &st.s, n);
        assert!(st.ne.eval_enclosure(n, 64).contains(&(&x[0] + &x[2])), "n = {}", n);
    }
}

#[test]
fn half_plane_with_decaying_residual() {
    let pred = "x1 + x3 > 0";
    let st = setup(rotation_scale(), vec![rat(1, 1), rat(0, 1), rat(1, 1)], pred);
    let ai = atomic_intervals(&st.torus, &st.ne).unwrap();
    assert_eq!(ai.zeros.len(), 2);
    assert!(st.torus.contains(&ai.set, TorusPoint::ONE));
    assert_eq!(ai.set.arcs().len(), 1);
    let r = rigorous_threshold(&st.torus, &st.ne, &ai.zeros, 3).unwrap();
    assert!(r.n > BigInt::from(0));
    assert_eq!(r.decay, rat(1, 2).max(r.decay.clone()));
    let o = OrbitOracle::new(&st.m, &st.s, vec![parse_predicate("T", pred).unwrap()]);
    let n_hat = empirical_threshold(&st.torus, &ai.set, &o, 0, 2000).unwrap();
    assert!(n_hat < 2000);
    check_prediction(&st, pred, &ai.set, n_hat, 2000);
}

#[test]
fn constant_dominant_function_gives_full_circle() {
    let pred = "x3 + 1 > 0";
    let st = setup(rotation_scale(), vec![rat(1, 1), rat(0, 1), rat(1, 1)], pred);
    let k = &st.ne.field;
    assert_eq!(st.ne.betas, vec![k.rational(rat(1, 2))]);
    let ai = atomic_intervals(&st.torus, &st.ne).unwrap();
    assert!(ai.set.is_full());
    assert!(ai.zeros.is_empty());
    // |r(n)| = (1/2)^n < 1 = f for n >= 1
    let r = rigorous_threshold(&st.torus, &st.ne, &ai.zeros, 3).unwrap();
    assert!(r.n <= BigInt::from(4));
    check_prediction(&st, pred, &ai.set, 0, 200);
}

#[test]
fn shifted_cosine_arc() {
    let pred = "2*x1 - 1 > 0";
    let st = setup(rotation_scale(), vec![rat(1, 1), rat(0, 1), rat(0, 1)], pred);
    assert!(st.ne.residual.is_empty());
    let ai = atomic_intervals(&st.torus, &st.ne).unwrap();
    assert_eq!(ai.zeros.len(), 2);
    assert!(ai.zeros.iter().all(|z| z.1 == 1));
    let arcs = ai.set.arcs();
    assert_eq!(arcs.len(), 1);
    let d = st.torus.describe(&ai.set);
    // from e^{-iπ/3} to e^{iπ/3}
    let third = std::f64::consts::PI / 3.0;
    assert!((d[0].start.0 - 5.0 * third).abs() < 1e-9);
    assert!((d[0].end.0 - third).abs() < 1e-9);
    let r = rigorous_threshold(&st.torus, &st.ne, &ai.zeros, 3).unwrap();
    assert_eq!(r.n, BigInt::from(0));
    check_prediction(&st, pred, &ai.set, 0, 500);
}

#[test]
fn quadratic_predicate_prediction() {
    let pred = "x1*x2 - x3 >= 0";
    let st = setup(rotation_scale(), vec![rat(2, 1), rat(1, 1), rat(3, 1)], pred);
    let ai = atomic_intervals(&st.torus, &st.ne).unwrap();
    let o = OrbitOracle::new(&st.m, &st.s, vec![parse_predicate("T", pred).unwrap()]);
    let n_hat = empirical_threshold(&st.torus, &ai.set, &o, 0, 1500).unwrap();
    check_prediction(&st, pred, &ai.set, n_hat, 1500);
    assert!(rigorous_threshold(&st.torus, &st.ne, &ai.zeros, 3).is_ok());
}
