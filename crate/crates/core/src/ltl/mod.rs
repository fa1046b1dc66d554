//! LTL formulas over named semialgebraic atoms.

mod nnf;
mod parse;
mod poly;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

pub use nnf::to_negation_free;
pub use parse::{parse, parse_predicate, parse_with};
pub use poly::{AtomicPredicate, MPoly, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    BoundedUntil(BigUint, Box<Formula>, Box<Formula>),
    BoundedRelease(BigUint, Box<Formula>, Box<Formula>),
}

/// Atom names mapped to their predicates.
pub type PredicateTable = BTreeMap<String, AtomicPredicate>;

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn finally(f: Formula) -> Self {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    pub fn bounded_until(b: impl Into<BigUint>, x: Formula, y: Formula) -> Self {
        Formula::BoundedUntil(b.into(), Box::new(x), Box::new(y))
    }

    pub fn bounded_release(b: impl Into<BigUint>, x: Formula, y: Formula) -> Self {
        Formula::BoundedRelease(b.into(), Box::new(x), Box::new(y))
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | Finally(a) | Globally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => vec![a, b],
            BoundedUntil(_, a, b) | BoundedRelease(_, a, b) => vec![a, b],
        }
    }

    pub fn is_temporal(&self) -> bool {
        use Formula::*;
        matches!(
            self,
            Next(_)
                | Until(..)
                | Release(..)
                | Finally(_)
                | Globally(_)
                | BoundedUntil(..)
                | BoundedRelease(..)
        )
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Distinct atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        fn go(f: &Formula, out: &mut Vec<String>) {
            if let Formula::Atom(n) = f {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            for c in f.children() {
                go(c, out);
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Only atoms, constants, `&`, `|`, `X`, `U`, `R` and their bounded forms.
    pub fn is_negation_free(&self) -> bool {
        use Formula::*;
        match self {
            Not(_) | Implies(..) | Finally(_) | Globally(_) => false,
            _ => self.children().iter().all(|c| c.is_negation_free()),
        }
    }

    /// Every atom resolves in `preds`.
    pub fn check_atoms(&self, preds: &PredicateTable) -> crate::Result<()> {
        for a in self.atoms() {
            if !preds.contains_key(&a) {
                return Err(crate::Error::UnknownAtom(a));
            }
        }
        Ok(())
    }
}

/// Maximum nesting depth of temporal operators.
pub fn temporal_depth(f: &Formula) -> usize {
    let inner = f.children().iter().map(|c| temporal_depth(c)).max().unwrap_or(0);
    inner + usize::from(f.is_temporal())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(n) => write!(f, "{}", n),
            Not(a) => write!(f, "!{}", a),
            Next(a) => write!(f, "X {}", a),
            Finally(a) => write!(f, "F {}", a),
            Globally(a) => write!(f, "G {}", a),
            And(a, b) => write!(f, "({} & {})", a, b),
            Or(a, b) => write!(f, "({} | {})", a, b),
            Implies(a, b) => write!(f, "({} -> {})", a, b),
            Until(a, b) => write!(f, "({} U {})", a, b),
            Release(a, b) => write!(f, "({} R {})", a, b),
            BoundedUntil(k, a, b) => write!(f, "({} U[{}] {})", a, k, b),
            BoundedRelease(k, a, b) => write!(f, "({} R[{}] {})", a, k, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_examples() {
        assert_eq!(temporal_depth(&Formula::atom("P")), 0);
        let gf = Formula::globally(Formula::finally(Formula::atom("P")));
        assert_eq!(temporal_depth(&gf), 2);
        let f = Formula::and(
            Formula::until(Formula::atom("P1"), Formula::atom("P2")),
            Formula::next(Formula::atom("P3")),
        );
        assert_eq!(temporal_depth(&f), 1);
    }

    #[test]
    fn display_is_parenthesised() {
        let f = Formula::until(
            Formula::atom("P1"),
            Formula::bounded_release(7u32, Formula::atom("P2"), Formula::not(Formula::True)),
        );
        assert_eq!(f.to_string(), "(P1 U (P2 R[7] !true))");
    }
}
