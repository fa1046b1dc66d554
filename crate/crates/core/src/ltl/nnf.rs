use super::{Formula, PredicateTable};
use crate::{Error, Result};

struct Negator {
    table: PredicateTable,
}

impl Negator {
    fn negated_atom(&mut self, name: &str) -> Result<String> {
        let pred = self
            .table
            .get(name)
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))?;
        let neg = pred.negated("");
        if let Some((n, _)) = self
            .table
            .iter()
            .find(|(_, p)| p.poly == neg.poly && p.relation == neg.relation)
        {
            return Ok(n.clone());
        }
        let mut fresh = format!("{}_neg", name);
        let mut k = 1;
        while self.table.contains_key(&fresh) {
            k += 1;
            fresh = format!("{}_neg{}", name, k);
        }
        self.table.insert(fresh.clone(), pred.negated(fresh.clone()));
        Ok(fresh)
    }

    fn go(&mut self, f: &Formula, pos: bool) -> Result<Formula> {
        use Formula::*;
        Ok(match f {
            True => if pos { True } else { False },
            False => if pos { False } else { True },
            Atom(n) => {
                if pos {
                    Atom(n.clone())
                } else {
                    Atom(self.negated_atom(n)?)
                }
            }
            Not(a) => self.go(a, !pos)?,
            And(a, b) | Or(a, b) => {
                let (x, y) = (self.go(a, pos)?, self.go(b, pos)?);
                if matches!(f, And(..)) == pos {
                    Formula::and(x, y)
                } else {
                    Formula::or(x, y)
                }
            }
            Implies(a, b) => {
                let (x, y) = (self.go(a, !pos)?, self.go(b, pos)?);
                if pos {
                    Formula::or(x, y)
                } else {
                    Formula::and(x, y)
                }
            }
            Next(a) => Formula::next(self.go(a, pos)?),
            Until(a, b) | Release(a, b) => {
                let (x, y) = (self.go(a, pos)?, self.go(b, pos)?);
                if matches!(f, Until(..)) == pos {
                    Formula::until(x, y)
                } else {
                    Formula::release(x, y)
                }
            }
            BoundedUntil(k, a, b) | BoundedRelease(k, a, b) => {
                let (x, y) = (self.go(a, pos)?, self.go(b, pos)?);
                if matches!(f, BoundedUntil(..)) == pos {
                    Formula::bounded_until(k.clone(), x, y)
                } else {
                    Formula::bounded_release(k.clone(), x, y)
                }
            }
            Finally(a) | Globally(a) => {
                let x = self.go(a, pos)?;
                if matches!(f, Finally(_)) == pos {
                    Formula::until(True, x)
                } else {
                    Formula::release(False, x)
                }
            }
        })
    }
}

/// Pushes negations to the atoms and removes `->`, `F`, `G`. A negated atom
/// is replaced by a predicate with negated polynomial and flipped
/// strictness, added to the returned table as `NAME_neg`.
pub fn to_negation_free(f: &Formula, preds: &PredicateTable) -> Result<(Formula, PredicateTable)> {
    let mut n = Negator { table: preds.clone() };
    let g = n.go(f, true)?;
    Ok((g, n.table))
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_predicate, temporal_depth, Relation};
    use super::*;
    use crate::numeric::rational::rat;

    fn table() -> PredicateTable {
        let mut t = PredicateTable::new();
        for (n, s) in [("P1", "x1 >= 0"), ("P2", "x2 > 1"), ("P3", "x1*x3 >= x2")] {
            t.insert(n.into(), parse_predicate(n, s).unwrap());
        }
        t
    }

    #[test]
    fn negated_atom_flips_strictness() {
        let (g, t) = to_negation_free(&parse("!P1").unwrap().0, &table()).unwrap();
        assert_eq!(g, Formula::atom("P1_neg"));
        let p = &t["P1_neg"];
        assert_eq!(p.relation, Relation::Gt);
        assert_eq!(p.poly.to_string(), "-x1");
    }

    #[test]
    fn dualities() {
        let t = table();
        let (g, _) = to_negation_free(&parse("!(P1 U P2)").unwrap().0, &t).unwrap();
        assert_eq!(g, Formula::release(Formula::atom("P1_neg"), Formula::atom("P2_neg")));
        let (g, _) = to_negation_free(&parse("G P1").unwrap().0, &t).unwrap();
        assert_eq!(g, Formula::release(Formula::False, Formula::atom("P1")));
        let (g, _) = to_negation_free(&parse("!X !P1").unwrap().0, &t).unwrap();
        assert_eq!(g, Formula::next(Formula::atom("P1")));
        let (g, _) = to_negation_free(&parse("!(P1 U[3] P2)").unwrap().0, &t).unwrap();
        assert_eq!(
            g,
            Formula::bounded_release(3u32, Formula::atom("P1_neg"), Formula::atom("P2_neg"))
        );
    }

    #[test]
    fn double_negation_reuses_original() {
        let (g, t) = to_negation_free(&parse("!P1 & !!P1").unwrap().0, &table()).unwrap();
        assert_eq!(g, Formula::and(Formula::atom("P1_neg"), Formula::atom("P1")));
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let mut t = table();
        t.insert("P1_neg".into(), parse_predicate("P1_neg", "x3 > 0").unwrap());
        let (g, t) = to_negation_free(&parse("!P1").unwrap().0, &t).unwrap();
        assert_eq!(g, Formula::atom("P1_neg2"));
        assert!(!t["P1_neg2"].holds_at(&[rat(0, 1), rat(0, 1), rat(0, 1)]));
    }

    #[test]
    fn output_is_negation_free_and_shallow() {
        let t = table();
        for s in ["!(G F P1 -> X (P2 R !P3))", "F G !(P1 | P2)", "!(P1 -> P2) U P3"] {
            let f = parse(s).unwrap().0;
            let (g, _) = to_negation_free(&f, &t).unwrap();
            assert!(g.is_negation_free(), "{}", g);
            assert!(temporal_depth(&g) <= temporal_depth(&f) + 1);
            assert!(g.size() <= 3 * f.size());
        }
    }
}
