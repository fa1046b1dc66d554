use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::poly::{AtomicPredicate, MPoly, QMPoly, Relation};
use super::{Formula, PredicateTable};
use crate::numeric::rational::Rational;
use crate::{Error, Result};

const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigUint),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bang,
    Amp,
    Bar,
    Arrow,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Gt,
    Ge,
    Lt,
    Le,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, column: c0 });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - s;
            push(&mut out, Tok::Ident(chars[s..i].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - s;
            let digits: String = chars[s..i].iter().collect();
            push(&mut out, Tok::Num(digits.parse().expect("digits")));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('>', Some('=')) => (Tok::Ge, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('!', _) => (Tok::Bang, 1),
            ('&', _) => (Tok::Amp, 1),
            ('|', _) => (Tok::Bar, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('^', _) => (Tok::Caret, 1),
            ('/', _) => (Tok::Slash, 1),
            ('>', _) => (Tok::Gt, 1),
            ('<', _) => (Tok::Lt, 1),
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character `{}`", c),
                })
            }
        };
        push(&mut out, tok);
        i += len;
        col += len;
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

const KEYWORDS: [&str; 7] = ["U", "R", "X", "F", "G", "true", "false"];

fn variable_index(s: &str) -> Option<usize> {
    match s {
        "x1" => Some(0),
        "x2" => Some(1),
        "x3" => Some(2),
        _ => None,
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    inline: PredicateTable,
    counter: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            inline: PredicateTable::new(),
            counter: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {}", what))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    // formula := disj (('U' | 'R') bound? formula)?
    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        let until = self.is_keyword("U");
        if !until && !self.is_keyword("R") {
            return Ok(lhs);
        }
        self.bump();
        let bound = if *self.peek() == Tok::LBrack {
            self.bump();
            let b = match self.bump() {
                Tok::Num(n) => n,
                _ => {
                    self.pos -= 1;
                    return self.err("expected a nonnegative integer bound");
                }
            };
            self.expect(Tok::RBrack, "`]`")?;
            Some(b)
        } else {
            None
        };
        let rhs = self.formula()?;
        Ok(match (until, bound) {
            (true, None) => Formula::until(lhs, rhs),
            (false, None) => Formula::release(lhs, rhs),
            (true, Some(b)) => Formula::bounded_until(b, lhs, rhs),
            (false, Some(b)) => Formula::bounded_release(b, lhs, rhs),
        })
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.implication()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = Formula::and(f, self.implication()?);
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(Formula::implies(lhs, self.implication()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, mk) in [
            ("X", Formula::next as fn(Formula) -> Formula),
            ("F", Formula::finally),
            ("G", Formula::globally),
        ] {
            if self.is_keyword(kw) {
                self.bump();
                return Ok(mk(self.unary()?));
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        let save = self.pos;
        match self.relation() {
            Ok(pred) => return Ok(self.register_inline(pred)),
            Err(_) => self.pos = save,
        }
        match self.bump() {
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => Ok(Formula::True),
            Tok::Ident(s) if s == "false" => Ok(Formula::False),
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && variable_index(&s).is_none() => {
                Ok(Formula::Atom(s))
            }
            Tok::Ident(s) if variable_index(&s).is_some() => {
                self.pos = save;
                self.relation().map(|p| self.register_inline(p))
            }
            Tok::Eof => {
                self.pos = save;
                self.err("unexpected end of input")
            }
            _ => {
                self.pos = save;
                self.err("expected an atom, constant or `(`")
            }
        }
    }

    fn register_inline(&mut self, (poly, relation): (MPoly, Relation)) -> Formula {
        if let Some((n, _)) = self
            .inline
            .iter()
            .find(|(_, p)| p.poly == poly && p.relation == relation)
        {
            return Formula::Atom(n.clone());
        }
        self.counter += 1;
        let name = format!("_a{}", self.counter);
        self.inline
            .insert(name.clone(), AtomicPredicate::new(name.clone(), poly, relation));
        Formula::Atom(name)
    }

    // relation := poly ('>' | '>=' | '<' | '<=') poly
    fn relation(&mut self) -> Result<(MPoly, Relation)> {
        let lhs = self.poly()?;
        let (swap, rel) = match self.peek() {
            Tok::Gt => (false, Relation::Gt),
            Tok::Ge => (false, Relation::Ge),
            Tok::Lt => (true, Relation::Gt),
            Tok::Le => (true, Relation::Ge),
            _ => return self.err("expected a relation `>`, `>=`, `<` or `<=`"),
        };
        self.bump();
        let rhs = self.poly()?;
        let diff = if swap {
            rhs.add(&lhs.neg())
        } else {
            lhs.add(&rhs.neg())
        };
        Ok((diff.clear_denominators(), rel))
    }

    fn poly(&mut self) -> Result<QMPoly> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.bump();
            self.term()?.neg()
        } else {
            if *self.peek() == Tok::Plus {
                self.bump();
            }
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QMPoly> {
        let mut acc = self.power()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<QMPoly> {
        let base = self.poly_atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Num(n) => match n.to_u32() {
                Some(k) if k <= MAX_EXPONENT => Ok(base.pow(k)),
                _ => {
                    self.pos -= 1;
                    self.err(format!("exponent exceeds {}", MAX_EXPONENT))
                }
            },
            _ => {
                self.pos -= 1;
                self.err("expected a nonnegative integer exponent")
            }
        }
    }

    fn poly_atom(&mut self) -> Result<QMPoly> {
        match self.bump() {
            Tok::Num(n) => {
                let num = BigInt::from(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Num(d) if !d.is_zero() => {
                            Ok(QMPoly::constant(Rational::new(num, BigInt::from(d))))
                        }
                        _ => {
                            self.pos -= 1;
                            self.err("expected a nonzero denominator")
                        }
                    }
                } else {
                    Ok(QMPoly::constant(Rational::from_integer(num)))
                }
            }
            Tok::Ident(s) => match variable_index(&s) {
                Some(i) => Ok(QMPoly::var(i)),
                None => {
                    self.pos -= 1;
                    self.err(format!("unknown variable `{}`", s))
                }
            },
            Tok::LParen => {
                let p = self.poly()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, variable or `(`")
            }
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

/// Parses a formula. Inline relations such as `(x1 >= 1)` become fresh
/// atoms `_a1, _a2, ...` and are returned in the table; named atoms are
/// left unresolved.
pub fn parse(text: &str) -> Result<(Formula, PredicateTable)> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok((f, p.inline))
}

/// Parses a formula and resolves named atoms against `preds`.
pub fn parse_with(text: &str, preds: &PredicateTable) -> Result<(Formula, PredicateTable)> {
    let (f, inline) = parse(text)?;
    let mut table = preds.clone();
    for (name, pred) in inline {
        if table.contains_key(&name) {
            return Err(Error::InvalidInput(format!(
                "predicate name `{}` is reserved for inline atoms",
                name
            )));
        }
        table.insert(name, pred);
    }
    f.check_atoms(&table)?;
    Ok((f, table))
}

/// Parses a relation such as `x1^2 + x2 >= 1/2`.
pub fn parse_predicate(name: &str, text: &str) -> Result<AtomicPredicate> {
    let mut p = Parser::new(text)?;
    let (poly, rel) = p.relation()?;
    p.finish()?;
    Ok(AtomicPredicate::new(name, poly, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    fn f(s: &str) -> Formula {
        parse(s).unwrap().0
    }

    #[test]
    fn basic_examples() {
        assert_eq!(f("G (P1)"), Formula::globally(Formula::atom("P1")));
        assert_eq!(
            f("P1 U (P2 R P3)"),
            Formula::until(
                Formula::atom("P1"),
                Formula::release(Formula::atom("P2"), Formula::atom("P3"))
            )
        );
        assert!(matches!(parse("P1 &"), Err(Error::Syntax { line: 1, column: 5, .. })));
    }

    #[test]
    fn precedence() {
        let a = || Formula::atom("a");
        let b = || Formula::atom("b");
        let c = || Formula::atom("c");
        assert_eq!(f("a | b & c"), Formula::or(a(), Formula::and(b(), c())));
        assert_eq!(f("a & b -> c"), Formula::and(a(), Formula::implies(b(), c())));
        assert_eq!(f("a U b U c"), Formula::until(a(), Formula::until(b(), c())));
        assert_eq!(f("a | b U c"), Formula::until(Formula::or(a(), b()), c()));
        assert_eq!(f("!X a"), Formula::not(Formula::next(a())));
        assert_eq!(f("a U[12] b"), Formula::bounded_until(12u32, a(), b()));
    }

    #[test]
    fn inline_relations() {
        let (g, t) = parse("G (x1 >= 1) & F ((x1 + 1) * x2 < 1/2) | X (x1 >= 1)").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(g.atoms(), vec!["_a1".to_string(), "_a2".to_string()]);
        let a2 = &t["_a2"];
        assert_eq!(a2.relation, Relation::Gt);
        // 1/2 - (x1+1)x2 > 0 scaled by 2
        let x = [rat(0, 1), rat(1, 3), rat(0, 1)];
        assert!(a2.holds_at(&x));
        let x = [rat(0, 1), rat(1, 1), rat(0, 1)];
        assert!(!a2.holds_at(&x));
    }

    #[test]
    fn predicates() {
        let p = parse_predicate("P", "x1^2 - 2*x2*x3 >= -3/4").unwrap();
        assert_eq!(p.relation, Relation::Ge);
        assert_eq!(p.poly.to_string(), "4*x1^2 - 8*x2*x3 + 3");
        assert!(parse_predicate("P", "x4 > 0").is_err());
        assert!(parse_predicate("P", "x1 > 1/0").is_err());
        assert!(parse_predicate("P", "x1^x2 > 0").is_err());
    }

    #[test]
    fn unknown_atom_is_reported() {
        let mut t = PredicateTable::new();
        t.insert("P".into(), parse_predicate("P", "x1 > 0").unwrap());
        assert!(parse_with("G P", &t).is_ok());
        assert_eq!(parse_with("G Q", &t).unwrap_err(), Error::UnknownAtom("Q".into()));
    }

    #[test]
    fn error_positions() {
        match parse("G (P1 &\n  ) ") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{:?}", other),
        }
    }
}
