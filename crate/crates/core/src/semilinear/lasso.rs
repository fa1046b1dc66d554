use num_integer::Integer;
use num_traits::ToPrimitive;

use super::EventuallyPeriodicSpec;
use crate::ltl::Formula;
use crate::oracle::OrbitOracle;
use crate::{Error, Result};

/// An ultimately periodic word over atom valuations. Position `n <= N`
/// reads `prefix[n]`; position `n > N` reads `cycle[(n - N - 1) mod P]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoWord {
    pub atoms: Vec<String>,
    pub threshold: u64,
    pub period: u64,
    pub prefix: Vec<Vec<bool>>,
    pub cycle: Vec<Vec<bool>>,
}

impl LassoWord {
    pub fn new(atoms: Vec<String>, prefix: Vec<Vec<bool>>, cycle: Vec<Vec<bool>>) -> Self {
        assert!(!prefix.is_empty() && !cycle.is_empty(), "lasso needs a prefix and a cycle");
        LassoWord {
            atoms,
            threshold: prefix.len() as u64 - 1,
            period: cycle.len() as u64,
            prefix,
            cycle,
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, n: u64) -> &[bool] {
        if n <= self.threshold {
            &self.prefix[n as usize]
        } else {
            &self.cycle[((n - self.threshold - 1) % self.period) as usize]
        }
    }

    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

/// Fills the word from the oracle up to `N + P` and cross-checks the cycle
/// against every spec.
pub fn build_lasso(specs: &[EventuallyPeriodicSpec], oracle: &OrbitOracle) -> Result<LassoWord> {
    let preds = oracle.predicates();
    assert_eq!(specs.len(), preds.len(), "one spec per predicate");
    let n = specs
        .iter()
        .map(|s| s.threshold.to_u64().expect("threshold fits in u64"))
        .max()
        .unwrap_or(0);
    let p = specs.iter().fold(1u64, |acc, s| acc.lcm(&(s.period as u64)));
    let row = |i: u64| -> Vec<bool> { (0..preds.len()).map(|a| oracle.holds(a, i)).collect() };
    let prefix: Vec<Vec<bool>> = (0..=n).map(row).collect();
    let cycle: Vec<Vec<bool>> = (n + 1..=n + p).map(row).collect();
    for (a, s) in specs.iter().enumerate() {
        for (j, r) in cycle.iter().enumerate() {
            let pos = n + 1 + j as u64;
            if r[a] != s.predicts(pos) {
                return Err(Error::SpecViolation {
                    atom: preds[a].name.clone(),
                    n: pos,
                });
            }
        }
    }
    Ok(LassoWord::new(preds.iter().map(|p| p.name.clone()).collect(), prefix, cycle))
}

/// Solves `v[i] = base[i] || (keep[i] && v[succ i])` (least) or
/// `v[i] = base[i] && (keep[i] || v[succ i])` (greatest) on the lasso.
fn fixpoint(w: &LassoWord, base: &[bool], keep: &[bool], least: bool) -> Vec<bool> {
    let len = w.len();
    let mut v = vec![!least; len];
    let step = |v: &[bool], i: usize| {
        let next = v[w.succ(i)];
        if least {
            base[i] || (keep[i] && next)
        } else {
            base[i] && (keep[i] || next)
        }
    };
    for _ in 0..2 {
        for i in (w.prefix.len()..len).rev() {
            v[i] = step(&v, i);
        }
    }
    for i in (0..w.prefix.len()).rev() {
        v[i] = step(&v, i);
    }
    v
}

fn bounded(w: &LassoWord, base: &[bool], keep: &[bool], bound: usize, least: bool) -> Vec<bool> {
    let len = w.len();
    let mut v = vec![!least; len];
    for _ in 0..=bound {
        let prev = v.clone();
        for i in 0..len {
            let next = prev[w.succ(i)];
            v[i] = if least {
                base[i] || (keep[i] && next)
            } else {
                base[i] && (keep[i] || next)
            };
        }
    }
    v
}

fn eval(w: &LassoWord, f: &Formula) -> Result<Vec<bool>> {
    let len = w.len();
    let all = |b: bool| vec![b; len];
    Ok(match f {
        Formula::True => all(true),
        Formula::False => all(false),
        Formula::Atom(name) => {
            let a = w
                .atoms
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| Error::UnknownAtom(name.clone()))?;
            (0..len).map(|i| w.at(i as u64)[a]).collect()
        }
        Formula::Not(g) => eval(w, g)?.into_iter().map(|x| !x).collect(),
        Formula::And(a, b) => zip(eval(w, a)?, eval(w, b)?, |x, y| x && y),
        Formula::Or(a, b) => zip(eval(w, a)?, eval(w, b)?, |x, y| x || y),
        Formula::Implies(a, b) => zip(eval(w, a)?, eval(w, b)?, |x, y| !x || y),
        Formula::Next(g) => {
            let v = eval(w, g)?;
            (0..len).map(|i| v[w.succ(i)]).collect()
        }
        Formula::Until(a, b) => fixpoint(w, &eval(w, b)?, &eval(w, a)?, true),
        Formula::Release(a, b) => fixpoint(w, &eval(w, b)?, &eval(w, a)?, false),
        Formula::Finally(g) => fixpoint(w, &eval(w, g)?, &all(true), true),
        Formula::Globally(g) => fixpoint(w, &eval(w, g)?, &all(false), false),
        // within `len` steps every reachable position has been seen
        Formula::BoundedUntil(bd, a, b) => match bd.to_usize().filter(|&x| x < len) {
            Some(x) => bounded(w, &eval(w, b)?, &eval(w, a)?, x, true),
            None => fixpoint(w, &eval(w, b)?, &eval(w, a)?, true),
        },
        Formula::BoundedRelease(bd, a, b) => match bd.to_usize().filter(|&x| x < len) {
            Some(x) => bounded(w, &eval(w, b)?, &eval(w, a)?, x, false),
            None => fixpoint(w, &eval(w, b)?, &eval(w, a)?, false),
        },
    })
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Truth of `f` at position `at` of the infinite word.
pub fn lasso_mc(w: &LassoWord, f: &Formula, at: u64) -> Result<bool> {
    let v = eval(w, f)?;
    let i = if at <= w.threshold {
        at as usize
    } else {
        w.prefix.len() + ((at - w.threshold - 1) % w.period) as usize
    };
    Ok(v[i])
}
