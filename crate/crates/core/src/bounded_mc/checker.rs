use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::ltl::Formula;
use crate::oracle::OrbitOracle;
use crate::{Error, Result};

/// Truth of an atom at a position.
pub trait Trace {
    fn holds(&self, atom: &str, n: u64) -> Result<bool>;
}

impl Trace for OrbitOracle {
    fn holds(&self, atom: &str, n: u64) -> Result<bool> {
        let i = self.index_of(atom).ok_or_else(|| Error::UnknownAtom(atom.to_string()))?;
        Ok(OrbitOracle::holds(self, i, n))
    }
}

/// A finite word; positions past its end are an error.
impl Trace for [Vec<(String, bool)>] {
    fn holds(&self, atom: &str, n: u64) -> Result<bool> {
        let row = self
            .get(n as usize)
            .ok_or_else(|| Error::Inconclusive(format!("position {} is past the end of the word", n)))?;
        row.iter()
            .find(|(a, _)| a == atom)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::UnknownAtom(atom.to_string()))
    }
}

#[derive(Clone, Debug)]
enum Node {
    True,
    False,
    Atom(String),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Next(usize),
    BU(u64, usize, usize),
    BR(u64, usize, usize),
}

fn bound(b: &BigUint) -> u64 {
    b.to_u64().unwrap_or(u64::MAX)
}

fn lower(f: &Formula, nodes: &mut Vec<Node>) -> Result<usize> {
    let n = match f {
        Formula::True => Node::True,
        Formula::False => Node::False,
        Formula::Atom(a) => Node::Atom(a.clone()),
        Formula::Not(g) => Node::Not(lower(g, nodes)?),
        Formula::And(a, b) => Node::And(lower(a, nodes)?, lower(b, nodes)?),
        Formula::Or(a, b) => Node::Or(lower(a, nodes)?, lower(b, nodes)?),
        Formula::Implies(a, b) => Node::Implies(lower(a, nodes)?, lower(b, nodes)?),
        Formula::Next(g) => Node::Next(lower(g, nodes)?),
        Formula::BoundedUntil(b, x, y) => Node::BU(bound(b), lower(x, nodes)?, lower(y, nodes)?),
        Formula::BoundedRelease(b, x, y) => Node::BR(bound(b), lower(x, nodes)?, lower(y, nodes)?),
        Formula::Until(..) | Formula::Release(..) | Formula::Finally(..) | Formula::Globally(..) => {
            return Err(Error::InvalidInput(format!("unbounded operator in {}", f)))
        }
    };
    nodes.push(n);
    Ok(nodes.len() - 1)
}

/// Recursive evaluation of a formula with bounded temporal operators only.
/// Results are memoised per (subformula, position); positions beyond
/// `max_position` abort with [`Error::Inconclusive`].
pub struct BoundedChecker<'a, T: Trace + ?Sized> {
    trace: &'a T,
    nodes: Vec<Node>,
    root: usize,
    memo: HashMap<(usize, u64), bool>,
    max_position: u64,
    memoize: bool,
    /// Largest position queried so far.
    pub reached: u64,
}

impl<'a, T: Trace + ?Sized> BoundedChecker<'a, T> {
    pub fn new(f: &Formula, trace: &'a T, max_position: u64) -> Result<Self> {
        let mut nodes = Vec::new();
        let root = lower(f, &mut nodes)?;
        Ok(BoundedChecker {
            trace,
            nodes,
            root,
            memo: HashMap::new(),
            max_position,
            memoize: true,
            reached: 0,
        })
    }

    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    pub fn check(&mut self, n: u64) -> Result<bool> {
        self.eval(self.root, n)
    }

    fn eval(&mut self, id: usize, n: u64) -> Result<bool> {
        if n > self.max_position {
            return Err(Error::Inconclusive(format!(
                "evaluation needs position {} beyond the budget {}",
                n, self.max_position
            )));
        }
        self.reached = self.reached.max(n);
        if self.memoize {
            if let Some(&v) = self.memo.get(&(id, n)) {
                return Ok(v);
            }
        }
        let v = match self.nodes[id].clone() {
            Node::True => true,
            Node::False => false,
            Node::Atom(a) => self.trace.holds(&a, n)?,
            Node::Not(g) => !self.eval(g, n)?,
            Node::And(a, b) => self.eval(a, n)? && self.eval(b, n)?,
            Node::Or(a, b) => self.eval(a, n)? || self.eval(b, n)?,
            Node::Implies(a, b) => !self.eval(a, n)? || self.eval(b, n)?,
            Node::Next(g) => self.eval(g, n + 1)?,
            Node::BU(b, f1, f2) => {
                let mut out = false;
                let mut i = 0u64;
                loop {
                    if self.eval(f2, n + i)? {
                        out = true;
                        break;
                    }
                    if !self.eval(f1, n + i)? || i == b {
                        break;
                    }
                    i += 1;
                }
                out
            }
            Node::BR(b, f1, f2) => {
                let mut out = true;
                let mut i = 0u64;
                loop {
                    if !self.eval(f2, n + i)? {
                        out = false;
                        break;
                    }
                    if self.eval(f1, n + i)? || i == b {
                        break;
                    }
                    i += 1;
                }
                out
            }
        };
        if self.memoize {
            self.memo.insert((id, n), v);
        }
        Ok(v)
    }
}

/// Evaluates a bounded formula at position `n`.
pub fn model_check_bounded<T: Trace + ?Sized>(f: &Formula, n: u64, trace: &T, max_position: u64) -> Result<bool> {
    BoundedChecker::new(f, trace, max_position)?.check(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    fn word(rows: &[(bool, bool)]) -> Vec<Vec<(String, bool)>> {
        rows.iter()
            .map(|&(p, q)| vec![("P".to_string(), p), ("Q".to_string(), q)])
            .collect()
    }

    fn run(text: &str, w: &[Vec<(String, bool)>]) -> Result<bool> {
        model_check_bounded(&parse(text).unwrap().0, 0, w, 1000)
    }

    #[test]
    fn recursive_cases() {
        let w = word(&[(false, true); 10]);
        assert!(run("P U[0] Q", &w).unwrap());
        let w = word(&[(true, false); 10]);
        assert!(!run("P U[5] Q", &w).unwrap());
        let w = word(&[(false, true); 10]);
        assert!(run("P R[3] Q", &w).unwrap());
        let w = word(&[(true, true), (true, false)]);
        assert!(run("P R[3] Q", &w).unwrap());
        assert!(!run("X (P R[3] Q)", &w).unwrap());
    }

    #[test]
    fn budget_and_end_of_word() {
        let w = word(&[(true, false); 4]);
        assert!(matches!(run("P U[10] Q", &w), Err(Error::Inconclusive(_))));
        let f = parse("P U[10] Q").unwrap().0;
        let long = word(&[(true, false); 40]);
        assert!(matches!(model_check_bounded(&f, 0, long.as_slice(), 5), Err(Error::Inconclusive(_))));
        assert!(run("P U Q", &w).is_err());
    }
}
