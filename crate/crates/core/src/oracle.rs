//! Exact evaluation of atomic predicates along the orbit `M^n s`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ltl::AtomicPredicate;
use crate::numeric::rational::{lcm_denominators, Rational};
use crate::spectral::RationalMatrix3;

/// Orbit stored as `v_n / den_n` with integer `v_n`.
struct State {
    n: u64,
    v: Vec<BigInt>,
    den: BigInt,
    truth: Vec<Vec<bool>>,
}

/// Caches the truth value of each predicate at every visited position.
pub struct OrbitOracle {
    a: Vec<Vec<BigInt>>,
    d: BigInt,
    preds: Vec<AtomicPredicate>,
    state: Mutex<State>,
}

impl OrbitOracle {
    pub fn new(m: &RationalMatrix3, s: &[Rational], preds: Vec<AtomicPredicate>) -> Self {
        let d = lcm_denominators(m.rows().iter().flatten());
        let dq = Rational::from_integer(d.clone());
        let a = m
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| (x * &dq).to_integer()).collect())
            .collect();
        let sd = lcm_denominators(s.iter());
        let sq = Rational::from_integer(sd.clone());
        let v = s.iter().map(|x| (x * &sq).to_integer()).collect();
        let k = preds.len();
        let mut o = OrbitOracle {
            a,
            d,
            preds,
            state: Mutex::new(State {
                n: 0,
                v,
                den: sd,
                truth: vec![Vec::new(); k],
            }),
        };
        o.record();
        o
    }

    fn record(&mut self) {
        let st = self.state.get_mut().unwrap();
        for (i, p) in self.preds.iter().enumerate() {
            let s = p.poly.sign_at_scaled(&st.v, &st.den);
            st.truth[i].push(p.relation.holds(s));
        }
    }

    pub fn predicates(&self) -> &[AtomicPredicate] {
        &self.preds
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.preds.iter().position(|p| p.name == name)
    }

    fn extend_to(&self, n: u64) {
        let mut st = self.state.lock().unwrap();
        while st.n < n {
            let v: Vec<BigInt> = self
                .a
                .iter()
                .map(|row| row.iter().zip(&st.v).map(|(x, y)| x * y).sum())
                .collect();
            st.v = v;
            st.den = &st.den * &self.d;
            st.n += 1;
            if st.n.is_multiple_of(8) {
                let g = st.v.iter().fold(st.den.clone(), |g, x| g.gcd(x));
                if !g.is_one() && !g.is_zero() {
                    st.v = st.v.iter().map(|x| x / &g).collect();
                    st.den = &st.den / &g;
                }
            }
            for (i, p) in self.preds.iter().enumerate() {
                let s = p.poly.sign_at_scaled(&st.v, &st.den);
                st.truth[i].push(p.relation.holds(s));
            }
        }
    }

    /// Truth of predicate `atom` at `M^n s`.
    pub fn holds(&self, atom: usize, n: u64) -> bool {
        self.extend_to(n);
        self.state.lock().unwrap().truth[atom][n as usize]
    }

    /// Truth values of `atom` at positions `0..=n`.
    pub fn prefix(&self, atom: usize, n: u64) -> Vec<bool> {
        self.extend_to(n);
        self.state.lock().unwrap().truth[atom][..=n as usize].to_vec()
    }

    /// Exact `M^n s`.
    pub fn point(m: &RationalMatrix3, s: &[Rational], n: u64) -> Vec<Rational> {
        let mut x = s.to_vec();
        for _ in 0..n {
            x = m.apply(&x);
        }
        x
    }

    /// Largest position evaluated so far.
    pub fn horizon(&self) -> u64 {
        self.state.lock().unwrap().n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_predicate;
    use crate::numeric::rational::rat;

    #[test]
    fn matches_direct_evaluation() {
        let m = RationalMatrix3::from_rows(vec![
            vec![rat(3, 5), rat(-4, 5), rat(0, 1)],
            vec![rat(4, 5), rat(3, 5), rat(0, 1)],
            vec![rat(1, 3), rat(0, 1), rat(-1, 2)],
        ])
        .unwrap();
        let s = vec![rat(1, 2), rat(0, 1), rat(2, 7)];
        let preds = vec![
            parse_predicate("A", "x1 > 0").unwrap(),
            parse_predicate("B", "x1^2 + x3 >= 1/4").unwrap(),
            parse_predicate("C", "x2*x3 - x1 > 0").unwrap(),
        ];
        let o = OrbitOracle::new(&m, &s, preds.clone());
        let mut x = s.clone();
        for n in 0..40 {
            for (i, p) in preds.iter().enumerate() {
                assert_eq!(o.holds(i, n), p.holds_at(&x), "atom {} at {}", i, n);
            }
            x = m.apply(&x);
        }
        assert_eq!(o.prefix(0, 5).len(), 6);
    }
}
