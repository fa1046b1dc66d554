//! The two eventually-periodic regimes: three real eigenvalues, and a
//! complex pair whose argument is a rational multiple of `π`.

mod lasso;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ltl::AtomicPredicate;
use crate::numeric::field::{KElem, SplittingField};
use crate::numeric::rational::Rational;
use crate::oracle::OrbitOracle;
use crate::spectral::{closed_form, spectrum, ClosedFormOrbit, RationalMatrix3};
use crate::symbolic::intervals::{contraction_upper, ln_hi, ln_lo, solve_log_linear};
use crate::symbolic::{aggregate, ExponentialSum};
use crate::{Error, Result};

pub use lasso::{build_lasso, lasso_mc, LassoWord};

/// For every `n > threshold`, the atom holds iff `n mod period ∈ residues`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventuallyPeriodicSpec {
    pub threshold: BigInt,
    pub period: u32,
    pub residues: BTreeSet<u32>,
}

impl EventuallyPeriodicSpec {
    pub fn predicts(&self, n: u64) -> bool {
        self.residues.contains(&((n % self.period as u64) as u32))
    }

    /// The same spec written with period `p`, a multiple of the current one.
    pub fn lifted(&self, p: u32) -> EventuallyPeriodicSpec {
        assert_eq!(p % self.period, 0, "period {} does not divide {}", self.period, p);
        EventuallyPeriodicSpec {
            threshold: self.threshold.clone(),
            period: p,
            residues: (0..p).filter(|r| self.residues.contains(&(r % self.period))).collect(),
        }
    }
}

/// Terms of `es` for `n ≡ parity (mod 2)`, grouped by `|σ|` in decreasing
/// order, each as a polynomial in `n`.
fn parity_groups(es: &ExponentialSum, parity: u32) -> Vec<(KElem, Vec<KElem>)> {
    let k = &es.field;
    let mut groups: Vec<(KElem, Vec<KElem>)> = Vec::new();
    for (e, c) in &es.terms {
        let sigma = es.base_product(e);
        let sq = k.mul(&sigma, &sigma);
        let c: Vec<KElem> = if parity == 1 && k.sign(&sigma) < 0 {
            c.iter().map(|x| k.neg(x)).collect()
        } else {
            c.clone()
        };
        match groups.iter_mut().find(|(m, _)| *m == sq) {
            Some((_, acc)) => *acc = poly_add(k, acc, &c),
            None => groups.push((sq, c)),
        }
    }
    groups.retain(|(_, c)| !c.is_empty());
    groups.sort_by(|a, b| k.cmp_real(&b.0, &a.0));
    groups
}

fn poly_add(k: &SplittingField, a: &[KElem], b: &[KElem]) -> Vec<KElem> {
    let z = k.zero();
    let out = (0..a.len().max(b.len()))
        .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    k.poly_trim(out)
}

/// Eventual sign along one parity class and the position after which it
/// is attained.
fn parity_sign(es: &ExponentialSum, parity: u32) -> (i32, BigInt) {
    let k = &es.field;
    let start = BigInt::from(es.valid_from);
    let groups = parity_groups(es, parity);
    let Some((top_sq, lead)) = groups.first() else {
        return (0, start);
    };
    let d = lead.len() - 1;
    let a_d = &lead[d];
    let sign = k.sign(a_d);
    let a_lo = k.abs_lower(a_d);
    // |α(n)| >= |a_d| n^d / 2 once n >= 2 Σ_{i<d} |a_i| / |a_d|
    let tail: Rational = lead[..d].iter().map(|a| k.abs_upper(a)).sum();
    let n_poly = if d == 0 {
        BigInt::zero()
    } else {
        (tail * Rational::from_integer(BigInt::from(2)) / &a_lo).ceil().to_integer() + 1
    };
    let mut n = std::cmp::max(start, n_poly);
    if groups.len() > 1 {
        let mut scale = Rational::zero();
        let mut q = Rational::zero();
        let mut deg = 0usize;
        for (sq, c) in &groups[1..] {
            scale += c.iter().map(|a| k.abs_upper(a)).sum::<Rational>();
            deg = deg.max(c.len() - 1);
            q = q.max(contraction_upper(k, &k.div(sq, top_sq).expect("nonzero modulus")));
        }
        // S n^deg q^n < |a_d| / 2 <= |α(n)|
        let l = -ln_hi(&q);
        let a = Rational::from_integer(BigInt::from(deg));
        let b = ln_hi(&scale) - ln_lo(&(a_lo / Rational::from_integer(BigInt::from(2))));
        let turn = (&a / &l).ceil().to_integer().max(BigInt::one());
        n = n.max(solve_log_linear(&l, &a, &b, turn));
    }
    (sign, n)
}

/// Spec of `pred` along an orbit whose eigenvalues are all real.
pub fn real_case_spec(pred: &AtomicPredicate, orbit: &ClosedFormOrbit) -> Result<EventuallyPeriodicSpec> {
    if orbit.complex {
        return Err(Error::WrongRegime("real-case analysis needs three real eigenvalues".into()));
    }
    let es = aggregate(pred, orbit);
    let mut threshold = BigInt::zero();
    let mut residues = BTreeSet::new();
    for parity in 0..2 {
        let (sign, n) = parity_sign(&es, parity);
        if pred.relation.holds(sign) {
            residues.insert(parity);
        }
        threshold = threshold.max(n);
    }
    Ok(EventuallyPeriodicSpec {
        threshold,
        period: 2,
        residues,
    })
}

/// Spec of `pred` when `λ^d` is real and positive. Each residue class
/// `n = dj + m` is an orbit of `M^d`, which has real spectrum.
pub fn rou_case_spec(
    pred: &AtomicPredicate,
    m: &RationalMatrix3,
    s: &[Rational],
    d: u32,
) -> Result<EventuallyPeriodicSpec> {
    let spec = spectrum(m);
    if !spec.complex {
        return Err(Error::WrongRegime("no complex eigenvalue pair".into()));
    }
    if spec.rou_order_exact() != Some(d) {
        return Err(Error::WrongRegime(format!("λ^{} is not real and positive", d)));
    }
    let md = m.pow(d as u64);
    let sub_spec = spectrum(&md);
    let mut x = s.to_vec();
    let mut nmax = BigInt::zero();
    let mut residues = BTreeSet::new();
    for r in 0..d {
        let orbit = closed_form(&md, &x, &sub_spec);
        let sub = real_case_spec(pred, &orbit)?;
        nmax = nmax.max(sub.threshold);
        for p in sub.residues {
            residues.insert(r + d * p);
        }
        x = m.apply(&x);
    }
    Ok(EventuallyPeriodicSpec {
        threshold: nmax * BigInt::from(d) + BigInt::from(d),
        period: 2 * d,
        residues,
    })
}

/// Largest threshold that is still materialised as an explicit prefix.
pub const MAX_PREFIX: u64 = 1 << 22;

/// Specs for every predicate of `oracle`, dispatched on the regime of `m`.
pub fn specs_for(
    m: &RationalMatrix3,
    s: &[Rational],
    oracle: &OrbitOracle,
) -> Result<Vec<EventuallyPeriodicSpec>> {
    let spec = spectrum(m);
    if !spec.complex {
        let orbit = closed_form(m, s, &spec);
        return oracle.predicates().iter().map(|p| real_case_spec(p, &orbit)).collect();
    }
    let d = spec
        .rou_order_exact()
        .ok_or_else(|| Error::WrongRegime("rotation is not periodic".into()))?;
    oracle.predicates().iter().map(|p| rou_case_spec(p, m, s, d)).collect()
}

/// Decides `f` at position 0 by building and evaluating the lasso.
pub fn decide_periodic(
    m: &RationalMatrix3,
    s: &[Rational],
    f: &crate::ltl::Formula,
    oracle: &OrbitOracle,
) -> Result<(bool, LassoWord, Vec<EventuallyPeriodicSpec>)> {
    let specs = specs_for(m, s, oracle)?;
    for sp in &specs {
        if sp.threshold.is_negative() || sp.threshold.to_u64().is_none_or(|t| t > MAX_PREFIX) {
            return Err(Error::Unsupported(format!("threshold {} is too large to materialise", sp.threshold)));
        }
    }
    let w = build_lasso(&specs, oracle)?;
    let v = lasso_mc(&w, f, 0)?;
    Ok((v, w, specs))
}
