//! Integer polynomials in `x1, x2, x3` and atomic predicates over them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numeric::rational::{lcm_denominators, Rational};

/// Sparse polynomial in three variables; keys are exponent triples.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<[u32; 3], BigInt>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || e.iter().all(|&k| k == 0) {
                parts.push(a.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(format!("x{}", i + 1)),
                    _ => parts.push(format!("x{}^{}", i + 1, k)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = MPoly::zero();
        p.add_term([0, 0, 0], c);
        p
    }

    /// The variable `x_{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        let mut p = MPoly::zero();
        p.add_term(e, BigInt::one());
        p
    }

    pub fn add_term(&mut self, e: [u32; 3], c: BigInt) {
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// All coefficients up to the total degree, zeros included, in graded
    /// lexicographic order.
    pub fn dense_coefficients(&self) -> Vec<([u32; 3], BigInt)> {
        let d = self.total_degree();
        let mut out = Vec::new();
        for t in 0..=d {
            for a in (0..=t).rev() {
                for b in (0..=t - a).rev() {
                    let e = [a, b, t - a - b];
                    out.push((e, self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)));
                }
            }
        }
        out
    }

    /// Bit size of the dense coefficient list.
    pub fn size_bits(&self) -> u64 {
        self.dense_coefficients().iter().map(|(_, c)| c.bits() + 1).sum()
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mut t = Rational::from_integer(c.clone());
            for i in 0..3 {
                for _ in 0..e[i] {
                    t *= &x[i];
                }
            }
            acc + t
        })
    }

    /// Sign of the value at the integer point `x / den` (with `den > 0`),
    /// using homogenisation to stay in the integers.
    pub fn sign_at_scaled(&self, x: &[BigInt], den: &BigInt) -> i32 {
        let d = self.total_degree();
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                t *= num_traits::pow(x[i].clone(), e[i] as usize);
            }
            let k: u32 = e.iter().sum();
            t *= num_traits::pow(den.clone(), (d - k) as usize);
            acc += t;
        }
        crate::numeric::rational::sign_of(&acc)
    }
}

/// Rational-coefficient polynomial used while parsing.
#[derive(Clone, Default, Debug, PartialEq)]
pub(crate) struct QMPoly {
    pub terms: BTreeMap<[u32; 3], Rational>,
}

impl QMPoly {
    pub fn constant(c: Rational) -> Self {
        let mut p = QMPoly::default();
        if !c.is_zero() {
            p.terms.insert([0, 0, 0], c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        let mut p = QMPoly::default();
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let v = out.terms.entry(*e).or_insert_with(Rational::zero);
            *v += c;
            if v.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        QMPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = QMPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out = out.add(&QMPoly {
                    terms: [(e, c1 * c2)].into_iter().collect(),
                });
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = QMPoly::constant(Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Integer polynomial with the same sign everywhere: multiply by the
    /// positive lcm of denominators.
    pub fn clear_denominators(&self) -> MPoly {
        let l = Rational::from_integer(lcm_denominators(self.terms.values()));
        let mut p = MPoly::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, (c * &l).to_integer());
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `p > 0`
    Gt,
    /// `p >= 0`
    Ge,
}

impl Relation {
    pub fn flipped(self) -> Self {
        match self {
            Relation::Gt => Relation::Ge,
            Relation::Ge => Relation::Gt,
        }
    }

    pub fn holds(self, sign: i32) -> bool {
        match self {
            Relation::Gt => sign > 0,
            Relation::Ge => sign >= 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

/// `poly > 0` or `poly >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomicPredicate {
    pub name: String,
    pub poly: MPoly,
    pub relation: Relation,
}

impl AtomicPredicate {
    pub fn new(name: impl Into<String>, poly: MPoly, relation: Relation) -> Self {
        AtomicPredicate {
            name: name.into(),
            poly,
            relation,
        }
    }

    /// The predicate `¬(p ~ 0)`, i.e. `−p` with flipped strictness.
    pub fn negated(&self, name: impl Into<String>) -> Self {
        AtomicPredicate {
            name: name.into(),
            poly: self.poly.neg(),
            relation: self.relation.flipped(),
        }
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let v = self.poly.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        self.relation.holds(s)
    }

    pub fn relation_text(&self) -> String {
        format!("{} {} 0", self.poly, self.relation.symbol())
    }
}
