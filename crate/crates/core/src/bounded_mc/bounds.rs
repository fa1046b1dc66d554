use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::ltl::{AtomicPredicate, Formula};
use crate::oracle::OrbitOracle;
use crate::spectral::{ClosedFormOrbit, Spectrum};
use crate::symbolic::{aggregate, all_zero, atomic_intervals, empirical_threshold, normalize, rigorous_threshold};
use crate::torus::{Torus, TorusSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    Rigorous,
    IntervalDerived,
    Empirical,
}

/// Bound attached to one temporal subformula.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCertificate {
    pub subformula: String,
    pub mode: BoundMode,
    /// Decimal bound, or `2^k` when too large to print.
    pub bound: String,
    /// Upper bound on `log2 B`.
    pub bound_log2: String,
    #[serde(skip)]
    pub value: Option<BigUint>,
    pub ingredients: BTreeMap<String, String>,
}

impl BoundCertificate {
    fn exact(subformula: &Formula, mode: BoundMode, b: BigUint, ingredients: BTreeMap<String, String>) -> Self {
        BoundCertificate {
            subformula: subformula.to_string(),
            mode,
            bound: b.to_string(),
            bound_log2: b.bits().to_string(),
            value: Some(b),
            ingredients,
        }
    }

    fn power_of_two(subformula: &Formula, mode: BoundMode, log2: BigInt, ingredients: BTreeMap<String, String>) -> Self {
        let value = log2
            .to_u64()
            .filter(|&k| k <= MAX_EXACT_BITS)
            .map(|k| BigUint::one() << k);
        BoundCertificate {
            subformula: subformula.to_string(),
            mode,
            bound: format!("2^{}", log2),
            bound_log2: log2.to_string(),
            value,
            ingredients,
        }
    }

    /// Bound as a loop limit; larger values saturate since the position
    /// budget is always exhausted first.
    pub fn loop_limit(&self) -> BigUint {
        self.value.clone().unwrap_or_else(|| BigUint::from(u64::MAX))
    }
}

const MAX_EXACT_BITS: u64 = 1 << 16;

/// Per-atom data in the irrational-rotation regime.
#[derive(Clone, Debug)]
pub struct AtomAnalysis {
    pub name: String,
    /// `Some(v)` when the predicate is constant along the orbit.
    pub constant: Option<bool>,
    pub set: TorusSet,
    /// Largest bit size of a zero of the dominant function.
    pub zero_bits: u64,
    pub rigorous_n: std::result::Result<BigInt, String>,
}

pub fn analyze_atom(
    pred: &AtomicPredicate,
    orbit: &ClosedFormOrbit,
    spec: &Spectrum,
    torus: &Torus,
    baker_c: u32,
) -> Result<AtomAnalysis> {
    let es = aggregate(pred, orbit);
    if all_zero(&es) {
        let v = pred.relation.holds(0);
        return Ok(AtomAnalysis {
            name: pred.name.clone(),
            constant: Some(v),
            set: if v { TorusSet::Full } else { TorusSet::empty() },
            zero_bits: 0,
            rigorous_n: Ok(BigInt::from(es.valid_from)),
        });
    }
    let ne = normalize(&es, spec)?;
    let ai = atomic_intervals(torus, &ne)?;
    let zero_bits = ai.zeros.iter().map(|(p, _)| torus.value(*p).size_bits()).max().unwrap_or(0);
    let rigorous_n = rigorous_threshold(torus, &ne, &ai.zeros, baker_c)
        .map(|r| r.n)
        .map_err(|e| e.to_string());
    Ok(AtomAnalysis {
        name: pred.name.clone(),
        constant: None,
        set: ai.set,
        zero_bits,
        rigorous_n,
    })
}

/// Threshold used by the interval-derived mode: the rigorous one when it is
/// small enough to act on, else the empirical one.
pub fn choose_threshold(
    atoms: &[AtomAnalysis],
    torus: &Torus,
    oracle: &OrbitOracle,
    horizon: u64,
    budget: u64,
    notes: &mut Vec<String>,
) -> Result<(u64, bool)> {
    let mut n = 0u64;
    let mut rigorous = true;
    for (i, a) in atoms.iter().enumerate() {
        if a.constant.is_some() {
            continue;
        }
        let exact = a.rigorous_n.as_ref().ok().and_then(|x| x.to_u64()).filter(|&x| x <= budget);
        let v = match exact {
            Some(x) => x,
            None => {
                rigorous = false;
                match &a.rigorous_n {
                    Ok(x) => notes.push(format!("atom {}: rigorous threshold {} exceeds the budget", a.name, x)),
                    Err(e) => notes.push(format!("atom {}: no rigorous threshold ({})", a.name, e)),
                }
                let e = empirical_threshold(torus, &a.set, oracle, i, horizon).ok_or_else(|| {
                    Error::Inconclusive(format!("atom {} disagrees with its arc set at the horizon {}", a.name, horizon))
                })?;
                notes.push(format!("atom {}: empirical threshold {}", a.name, e));
                e
            }
        };
        n = n.max(v);
    }
    Ok((n, rigorous))
}

/// Arc sets of subformulas and interval-derived bounds for temporal nodes.
pub struct IntervalBounds<'a> {
    pub torus: &'a Torus,
    pub atoms: &'a [AtomAnalysis],
    pub threshold: u64,
    pub baker_d: u32,
    pub cap: u64,
    pub certificates: Vec<BoundCertificate>,
}

impl IntervalBounds<'_> {
    fn cert(&mut self, f: &Formula, steps: u64) {
        let b = BigUint::from(self.threshold) + BigUint::from(steps) + 1u32;
        let mut ing = BTreeMap::new();
        ing.insert("threshold".into(), self.threshold.to_string());
        ing.insert("stabilisation_steps".into(), steps.to_string());
        self.certificates
            .push(BoundCertificate::exact(f, BoundMode::IntervalDerived, b, ing));
    }

    fn bounded_steps(&self, k: &BigUint) -> Result<u64> {
        k.to_u64().filter(|&k| k <= self.cap).ok_or_else(|| {
            Error::Unsupported(format!("bound {} exceeds the construction cap {}", k, self.cap))
        })
    }

    /// `J_f`, pushing certificates in post-order.
    pub fn set(&mut self, f: &Formula) -> Result<TorusSet> {
        let t = self.torus;
        Ok(match f {
            Formula::True => TorusSet::Full,
            Formula::False => TorusSet::empty(),
            Formula::Atom(a) => self
                .atoms
                .iter()
                .find(|x| &x.name == a)
                .ok_or_else(|| Error::UnknownAtom(a.clone()))?
                .set
                .clone(),
            Formula::And(a, b) => {
                let (x, y) = (self.set(a)?, self.set(b)?);
                t.intersect(&x, &y)
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.set(a)?, self.set(b)?);
                t.union(&x, &y)
            }
            Formula::Next(g) => t.rotate_inv_gamma(&self.set(g)?, 1),
            Formula::Until(a, b) => {
                let (x, y) = (self.set(a)?, self.set(b)?);
                let c = t.until_set(&x, &y, self.baker_d, self.cap)?;
                self.cert(f, c.steps);
                c.set
            }
            Formula::Release(a, b) => {
                let (x, y) = (self.set(a)?, self.set(b)?);
                let c = t.release_set(&x, &y, self.baker_d, self.cap)?;
                self.cert(f, c.steps);
                c.set
            }
            Formula::BoundedUntil(k, a, b) => {
                let (x, y) = (self.set(a)?, self.set(b)?);
                t.bounded_until_set(&x, &y, self.bounded_steps(k)?)
            }
            Formula::BoundedRelease(k, a, b) => {
                let (x, y) = (self.set(a)?, self.set(b)?);
                t.bounded_release_set(&x, &y, self.bounded_steps(k)?)
            }
            Formula::Finally(g) => {
                let y = self.set(g)?;
                let c = t.until_set(&TorusSet::Full, &y, self.baker_d, self.cap)?;
                self.cert(f, c.steps);
                c.set
            }
            Formula::Globally(g) => {
                let y = self.set(g)?;
                let c = t.release_set(&TorusSet::empty(), &y, self.baker_d, self.cap)?;
                self.cert(f, c.steps);
                c.set
            }
            Formula::Not(_) | Formula::Implies(..) => {
                return Err(Error::InvalidInput(format!("{} is not negation free", f)))
            }
        })
    }
}

/// Inputs of the return-time recursion, all as bit counts.
pub struct RigorousParams {
    /// `(‖γ‖ + 2·max ‖z‖)^C`: exponent of the endpoint separation.
    pub separation_exp: BigInt,
    /// `‖γ‖^D`.
    pub return_exp: BigInt,
    /// `log2` of the dominance threshold.
    pub threshold_log2: BigInt,
    pub constants: (u32, u32),
}

impl RigorousParams {
    pub fn new(gamma_bits: u64, zero_bits: u64, threshold: &BigInt, c: u32, d: u32) -> Self {
        RigorousParams {
            separation_exp: num_traits::pow(BigInt::from(gamma_bits + 2 * zero_bits), c as usize),
            return_exp: num_traits::pow(BigInt::from(gamma_bits), d as usize),
            threshold_log2: BigInt::from(threshold.bits()),
            constants: (c, d),
        }
    }
}

/// `log2` bounds along the recursion: endpoint separation `d` as
/// `log2(1/d)`, and retraction depth `R` as `log2 R` (`None` for zero).
#[derive(Clone, Debug)]
struct Rig {
    inv_d: BigInt,
    r: Option<BigInt>,
}

fn max_opt(a: &Option<BigInt>, b: &Option<BigInt>) -> Option<BigInt> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y).clone()),
        (x, None) => x.clone(),
        (None, y) => y.clone(),
    }
}

pub struct RigorousBounds<'a> {
    pub params: &'a RigorousParams,
    pub certificates: Vec<BoundCertificate>,
}

impl RigorousBounds<'_> {
    /// Separation from retraction depth: `d >= (R + 2)^{-E}`.
    fn separation(&self, r: &Option<BigInt>) -> BigInt {
        let log_r2 = match r {
            None => BigInt::one(),
            Some(x) => std::cmp::max(x.clone(), BigInt::one()) + 1,
        };
        &self.params.separation_exp * log_r2
    }

    /// `log2 b` for `b = 2π (2π/d)^{‖γ‖^D}`.
    fn return_log2(&self, inv_d: &BigInt) -> BigInt {
        BigInt::from(3) + &self.params.return_exp * (BigInt::from(3) + inv_d)
    }

    /// `log2` of the return time including the dominance threshold.
    fn time_log2(&self, inv_d: &BigInt) -> BigInt {
        std::cmp::max(self.return_log2(inv_d), self.params.threshold_log2.clone()) + 1
    }

    fn leaf(&self) -> Rig {
        Rig {
            inv_d: self.separation(&None),
            r: None,
        }
    }

    fn with_r(&self, r: Option<BigInt>) -> Rig {
        Rig {
            inv_d: self.separation(&r),
            r,
        }
    }

    fn cert(&mut self, f: &Formula, t_log2: BigInt, r: &Option<BigInt>, inv_d: &BigInt) {
        let mut ing = BTreeMap::new();
        ing.insert("log2_inverse_separation".into(), inv_d.to_string());
        ing.insert(
            "log2_retraction_depth".into(),
            r.as_ref().map_or("-inf".into(), |x| x.to_string()),
        );
        ing.insert("temporal_depth".into(), crate::ltl::temporal_depth(f).to_string());
        ing.insert("baker_c".into(), self.params.constants.0.to_string());
        ing.insert("baker_d".into(), self.params.constants.1.to_string());
        ing.insert("log2_threshold".into(), self.params.threshold_log2.to_string());
        self.certificates
            .push(BoundCertificate::power_of_two(f, BoundMode::Rigorous, t_log2, ing));
    }

    fn until(&mut self, f: &Formula, x: Rig, y: Rig) -> Rig {
        let b = self.return_log2(&y.inv_d);
        let t = self.time_log2(&y.inv_d);
        self.cert(f, t, &y.r, &y.inv_d);
        let r = max_opt(&max_opt(&x.r, &y.r), &Some(b)).map(|v| v + 1);
        self.with_r(r)
    }

    fn release(&mut self, f: &Formula, x: Rig, y: Rig) -> Rig {
        let both_r = max_opt(&x.r, &y.r);
        let both = self.separation(&both_r);
        let t = std::cmp::max(self.time_log2(&both), self.time_log2(&y.inv_d));
        self.cert(f, t, &both_r, &both);
        let r = max_opt(&both_r, &Some(self.return_log2(&both))).map(|v| v + 1);
        self.with_r(r)
    }

    pub fn run(&mut self, f: &Formula) -> Result<()> {
        self.rig(f).map(|_| ())
    }

    fn rig(&mut self, f: &Formula) -> Result<Rig> {
        Ok(match f {
            Formula::True | Formula::False | Formula::Atom(_) => self.leaf(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (x, y) = (self.rig(a)?, self.rig(b)?);
                self.with_r(max_opt(&x.r, &y.r))
            }
            Formula::Next(g) => {
                let x = self.rig(g)?;
                self.with_r(Some(x.r.map_or(BigInt::zero(), |v| v + 1)))
            }
            Formula::Until(a, b) => {
                let (x, y) = (self.rig(a)?, self.rig(b)?);
                self.until(f, x, y)
            }
            Formula::Release(a, b) => {
                let (x, y) = (self.rig(a)?, self.rig(b)?);
                self.release(f, x, y)
            }
            Formula::Finally(g) => {
                let y = self.rig(g)?;
                let x = self.leaf();
                self.until(f, x, y)
            }
            Formula::Globally(g) => {
                let y = self.rig(g)?;
                let x = self.leaf();
                self.release(f, x, y)
            }
            Formula::BoundedUntil(_, a, b) | Formula::BoundedRelease(_, a, b) => {
                let (x, y) = (self.rig(a)?, self.rig(b)?);
                self.with_r(max_opt(&x.r, &y.r).map(|v| v + 1))
            }
            Formula::Not(_) | Formula::Implies(..) => {
                return Err(Error::InvalidInput(format!("{} is not negation free", f)))
            }
        })
    }
}

/// Replaces every unbounded temporal operator by its bounded form, taking
/// bounds from `certs` in post-order.
pub fn boundify(f: &Formula, certs: &[BoundCertificate]) -> Result<Formula> {
    let mut next = 0usize;
    let out = boundify_rec(f, certs, &mut next)?;
    Ok(out)
}

fn boundify_rec(f: &Formula, certs: &[BoundCertificate], next: &mut usize) -> Result<Formula> {
    let take = |next: &mut usize| -> Result<BigUint> {
        let c = certs.get(*next).ok_or(Error::MissingCertificate(*next))?;
        *next += 1;
        Ok(c.loop_limit())
    };
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(boundify_rec(g, certs, next)?),
        Formula::Next(g) => Formula::next(boundify_rec(g, certs, next)?),
        Formula::And(a, b) => Formula::and(boundify_rec(a, certs, next)?, boundify_rec(b, certs, next)?),
        Formula::Or(a, b) => Formula::or(boundify_rec(a, certs, next)?, boundify_rec(b, certs, next)?),
        Formula::Implies(a, b) => Formula::implies(boundify_rec(a, certs, next)?, boundify_rec(b, certs, next)?),
        Formula::BoundedUntil(k, a, b) => {
            Formula::bounded_until(k.clone(), boundify_rec(a, certs, next)?, boundify_rec(b, certs, next)?)
        }
        Formula::BoundedRelease(k, a, b) => {
            Formula::bounded_release(k.clone(), boundify_rec(a, certs, next)?, boundify_rec(b, certs, next)?)
        }
        Formula::Until(a, b) => {
            let (x, y) = (boundify_rec(a, certs, next)?, boundify_rec(b, certs, next)?);
            Formula::bounded_until(take(next)?, x, y)
        }
        Formula::Release(a, b) => {
            let (x, y) = (boundify_rec(a, certs, next)?, boundify_rec(b, certs, next)?);
            Formula::bounded_release(take(next)?, x, y)
        }
        Formula::Finally(g) => {
            let y = boundify_rec(g, certs, next)?;
            Formula::bounded_until(take(next)?, Formula::True, y)
        }
        Formula::Globally(g) => {
            let y = boundify_rec(g, certs, next)?;
            Formula::bounded_release(take(next)?, Formula::False, y)
        }
    })
}

/// Certificates assigning the same bound `b` to every temporal node.
pub fn uniform_certificates(f: &Formula, b: u64, mode: BoundMode) -> Vec<BoundCertificate> {
    let mut out = Vec::new();
    collect_uniform(f, b, mode, &mut out);
    out
}

fn collect_uniform(f: &Formula, b: u64, mode: BoundMode, out: &mut Vec<BoundCertificate>) {
    for c in f.children() {
        collect_uniform(c, b, mode, out);
    }
    if matches!(
        f,
        Formula::Until(..) | Formula::Release(..) | Formula::Finally(_) | Formula::Globally(_)
    ) {
        let mut ing = BTreeMap::new();
        ing.insert("horizon".into(), b.to_string());
        out.push(BoundCertificate::exact(f, mode, BigUint::from(b), ing));
    }
}
