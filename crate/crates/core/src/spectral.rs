//! Characteristic polynomial, eigenvalue regime, and closed forms for `M^n s`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::algebraic::{identify, is_root_of_unity, AlgebraicNumber};
use crate::numeric::factor::factor;
use crate::numeric::field::{KElem, SplittingField};
use crate::numeric::interval::CInterval;
use crate::numeric::matrix::{charpoly, identity, mat_mul, mat_vec, rank, Matrix};
use crate::numeric::poly::{IntPolynomial, QPoly};
use crate::numeric::rational::{int, sqrt_interval, Rational};

/// A 3×3 rational matrix; smaller inputs are zero-padded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix3 {
    rows: Matrix,
}

impl RationalMatrix3 {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > 3 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "matrix must be square of dimension 1 to 3, got {} rows",
                n
            )));
        }
        let mut full = vec![vec![Rational::zero(); 3]; 3];
        for (i, r) in rows.into_iter().enumerate() {
            for (j, x) in r.into_iter().enumerate() {
                full[i][j] = x;
            }
        }
        Ok(RationalMatrix3 { rows: full })
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        RationalMatrix3 {
            rows: rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
        }
    }

    pub fn identity() -> Self {
        RationalMatrix3 { rows: identity(3) }
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.rows, v)
    }

    pub fn mul(&self, other: &RationalMatrix3) -> RationalMatrix3 {
        RationalMatrix3 {
            rows: mat_mul(&self.rows, &other.rows),
        }
    }

    pub fn pow(&self, mut e: u64) -> RationalMatrix3 {
        let mut acc = RationalMatrix3::identity();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }
}

/// Pads a start vector of length 1 to 3 with zeros.
pub fn pad_vector(v: Vec<Rational>) -> Result<Vec<Rational>> {
    if v.is_empty() || v.len() > 3 {
        return Err(Error::InvalidInput(format!("start vector must have 1 to 3 entries, got {}", v.len())));
    }
    let mut v = v;
    v.resize(3, Rational::zero());
    Ok(v)
}

fn char_poly_q(m: &RationalMatrix3) -> QPoly {
    charpoly(&m.rows)
}

/// Characteristic polynomial with denominators cleared.
pub fn char_poly(m: &RationalMatrix3) -> IntPolynomial {
    IntPolynomial::from_q(&char_poly_q(m))
}

#[derive(Clone, Debug)]
pub enum EigenClassification {
    ThreeReal {
        eigs: [AlgebraicNumber; 3],
        jordan_case: u8,
    },
    ComplexPair {
        lambda: AlgebraicNumber,
        rho: AlgebraicNumber,
        gamma: AlgebraicNumber,
        rou_order: Option<u32>,
    },
}

impl EigenClassification {
    pub fn regime_name(&self) -> &'static str {
        match self {
            EigenClassification::ThreeReal { .. } => "three-real",
            EigenClassification::ComplexPair { rou_order: Some(_), .. } => "root-of-unity",
            EigenClassification::ComplexPair { rou_order: None, .. } => "irrational-rotation",
        }
    }
}

/// Eigenvalues as exact elements of the splitting field.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub field: Arc<SplittingField>,
    /// Distinct eigenvalues with algebraic multiplicity. In the complex
    /// regime the order is `λ` (positive imaginary part), `λ̄`, `ρ`.
    pub eigs: Vec<(KElem, usize)>,
    pub complex: bool,
    pub jordan_case: u8,
}

fn disc_cubic(a: &Rational, b: &Rational, c: &Rational) -> Rational {
    // x^3 + a x^2 + b x + c
    a * a * b * b - int(4) * b * b * b - int(4) * a * a * a * c - int(27) * c * c
        + int(18) * a * b * c
}

fn linear_root(p: &IntPolynomial) -> Rational {
    Rational::new(-p.coeffs()[0].clone(), p.coeffs()[1].clone())
}

/// Computes the splitting field of the characteristic polynomial and places
/// every eigenvalue in it.
pub fn spectrum(m: &RationalMatrix3) -> Spectrum {
    let chi = char_poly_q(m).monic();
    let fs = factor(&IntPolynomial::from_q(&chi));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let (field, mut eigs, complex) = if fs.iter().all(|(f, _)| f.degree() == 1) {
        let k = SplittingField::rationals();
        let mut e: Vec<(Rational, usize)> = fs.iter().map(|(f, m)| (linear_root(f), *m)).collect();
        e.sort_by(|a, b| b.0.cmp(&a.0));
        let eigs = e.into_iter().map(|(r, m)| (k.rational(r), m)).collect();
        (k, eigs, false)
    } else if let Some((q, _)) = fs.iter().find(|(f, _)| f.degree() == 2) {
        let r = linear_root(&fs.iter().find(|(f, _)| f.degree() == 1).unwrap().0);
        let qm = q.to_q().monic();
        let (b, c) = (qm.coeff(1), qm.coeff(0));
        let d = &b * &b - int(4) * &c;
        let k = SplittingField::new(AlgebraicNumber::zero(), d.clone());
        let mb = k.rational(-b * &half);
        let hd = k.scale(&k.delta(), &half);
        let e1 = k.add(&mb, &hd);
        let e2 = k.sub(&mb, &hd);
        let complex = d.is_negative();
        (k, vec![(e1, 1), (e2, 1), (k_rational(r), 1)], complex)
    } else {
        let (a2, a1, a0) = (chi.coeff(2), chi.coeff(1), chi.coeff(0));
        let d = disc_cubic(&a2, &a1, &a0);
        let theta = crate::numeric::algebraic::poly_real_roots(&fs[0].0)
            .expect("nonzero cubic")
            .pop()
            .expect("a real cubic has a real root");
        let k = SplittingField::new(theta, d.clone());
        let t = k.theta_elem();
        // χ(x)/(x − θ) = x² + b'x + c' with b' = θ + a2
        let bp = k.add(&t, &k.rational(a2.clone()));
        let dchi = chi.derivative();
        let dchi_t = k.from_f(dchi);
        let w = k.div(&k.delta(), &dchi_t).expect("simple root");
        let mb = k.scale(&bp, &-half.clone());
        let hw = k.scale(&w, &half);
        let e1 = k.add(&mb, &hw);
        let e2 = k.sub(&mb, &hw);
        let complex = d.is_negative();
        (k, vec![(e1, 1), (e2, 1), (t, 1)], complex)
    };
    if complex {
        let im = field.enclosure(&eigs[0].0, 32).im;
        if im.hi.is_negative() {
            eigs.swap(0, 1);
        }
    } else if eigs.len() == 3 {
        eigs.sort_by(|a, b| field.cmp_real(&b.0, &a.0));
    }
    let blocks: usize = eigs
        .iter()
        .map(|(e, mult)| {
            if *mult == 1 {
                1
            } else {
                let r = e.as_rational().expect("repeated eigenvalues are rational");
                let shifted: Matrix = (0..3)
                    .map(|i| {
                        (0..3)
                            .map(|j| {
                                if i == j {
                                    &m.rows[i][j] - &r
                                } else {
                                    m.rows[i][j].clone()
                                }
                            })
                            .collect()
                    })
                    .collect();
                3 - rank(&shifted)
            }
        })
        .sum();
    Spectrum {
        field: Arc::new(field),
        eigs,
        complex,
        jordan_case: (4 - blocks) as u8,
    }
}

fn k_rational(r: Rational) -> KElem {
    SplittingField::rationals().rational(r)
}

impl Spectrum {
    pub fn lambda(&self) -> Option<&KElem> {
        self.complex.then(|| &self.eigs[0].0)
    }

    pub fn rho(&self) -> Option<&KElem> {
        self.complex.then(|| &self.eigs[2].0)
    }

    /// Smallest `d <= 144` with `λ^d` real and positive, decided in the field.
    pub fn rou_order_exact(&self) -> Option<u32> {
        let k = &self.field;
        let l = self.lambda()?;
        let mut p = k.one();
        for d in 1..=144u32 {
            p = k.mul(&p, l);
            if k.is_real(&p) && k.sign(&p) > 0 {
                return Some(d);
            }
        }
        None
    }

    /// `γ = λ/|λ|` as an algebraic number, via `γ² = λ/λ̄`.
    pub fn gamma(&self) -> Option<AlgebraicNumber> {
        let k = &self.field;
        let l = self.lambda()?;
        let ratio = k.div(l, &k.conj(l)).expect("λ is nonzero");
        let c = k.charpoly_of(&ratio);
        // c(x^2)
        let mut sq = vec![Rational::zero(); 2 * c.coeffs().len() - 1];
        for (i, v) in c.coeffs().iter().enumerate() {
            sq[2 * i] = v.clone();
        }
        let poly = IntPolynomial::from_q(&QPoly::new(sq));
        let g = identify(&poly, |prec| {
            let e = k.enclosure(l, prec + 16);
            let n = sqrt_interval(&e.norm_sqr(), prec + 16);
            let inv = n.recip().expect("λ is nonzero");
            CInterval::new(&e.re * &inv, &e.im * &inv)
        });
        assert!(g.degree() <= 12, "γ has degree {} > 12", g.degree());
        Some(g)
    }

    pub fn classification(&self) -> EigenClassification {
        let k = &self.field;
        if self.complex {
            let gamma = self.gamma().unwrap();
            let rou_order = is_root_of_unity(&gamma).expect("|γ| = 1");
            EigenClassification::ComplexPair {
                lambda: k.to_algebraic(&self.eigs[0].0),
                rho: k.to_algebraic(&self.eigs[2].0),
                gamma,
                rou_order,
            }
        } else {
            let mut all: Vec<AlgebraicNumber> = Vec::new();
            for (e, mult) in &self.eigs {
                let a = k.to_algebraic(e);
                for _ in 0..*mult {
                    all.push(a.clone());
                }
            }
            EigenClassification::ThreeReal {
                eigs: [all[0].clone(), all[1].clone(), all[2].clone()],
                jordan_case: self.jordan_case,
            }
        }
    }
}

pub fn classify(m: &RationalMatrix3) -> EigenClassification {
    spectrum(m).classification()
}

/// `M^n s = Σ_b c_{i,b}(n) β_b^n` for `n >= valid_from`, with `β_b` the
/// distinct nonzero eigenvalues and `c_{i,b}` polynomials over the field.
#[derive(Clone, Debug)]
pub struct ClosedFormOrbit {
    pub field: Arc<SplittingField>,
    pub bases: Vec<KElem>,
    /// `coeffs[i][b]` is the polynomial in `n` multiplying `β_b^n` in
    /// coordinate `i`, lowest degree first.
    pub coeffs: Vec<Vec<Vec<KElem>>>,
    pub valid_from: u64,
    pub complex: bool,
    pub jordan_case: u8,
}

fn solve_k(k: &SplittingField, mut a: Vec<Vec<KElem>>, mut rhs: Vec<Vec<KElem>>) -> Vec<Vec<KElem>> {
    // solves a·x = rhs column-wise; a is square and invertible
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular system");
        a.swap(p, c);
        rhs.swap(p, c);
        let inv = k.inv(&a[c][c]).unwrap();
        for j in 0..n {
            a[c][j] = k.mul(&a[c][j], &inv);
        }
        for x in rhs[c].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                let t = k.mul(&f, &a[c][j]);
                a[r][j] = k.sub(&a[r][j], &t);
            }
            for j in 0..rhs[r].len() {
                let t = k.mul(&f, &rhs[c][j]);
                rhs[r][j] = k.sub(&rhs[r][j], &t);
            }
        }
    }
    rhs
}

pub fn closed_form(m: &RationalMatrix3, s: &[Rational], spec: &Spectrum) -> ClosedFormOrbit {
    let k = spec.field.clone();
    let m0: usize = spec
        .eigs
        .iter()
        .filter(|(e, _)| e.is_zero())
        .map(|(_, mult)| *mult)
        .sum();
    let nonzero: Vec<(KElem, usize)> = spec.eigs.iter().filter(|(e, _)| !e.is_zero()).cloned().collect();
    let funcs: Vec<(usize, usize)> = nonzero
        .iter()
        .enumerate()
        .flat_map(|(b, (_, mult))| (0..*mult).map(move |p| (b, p)))
        .collect();
    let r = funcs.len();
    let valid_from = m0 as u64;
    // orbit samples
    let mut x = s.to_vec();
    for _ in 0..m0 {
        x = m.apply(&x);
    }
    let mut samples = Vec::with_capacity(r);
    for _ in 0..r {
        samples.push(x.clone());
        x = m.apply(&x);
    }
    let a: Vec<Vec<KElem>> = (0..r)
        .map(|j| {
            let n = valid_from + j as u64;
            funcs
                .iter()
                .map(|&(b, p)| {
                    let bn = k.pow(&nonzero[b].0, n);
                    k.scale(&bn, &int(n as i64).pow(p as i32))
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Vec<KElem>> = samples
        .iter()
        .map(|v| v.iter().map(|c| k.rational(c.clone())).collect())
        .collect();
    let sol = if r == 0 { vec![] } else { solve_k(&k, a, rhs) };
    let coeffs = (0..3)
        .map(|i| {
            (0..nonzero.len())
                .map(|b| {
                    let poly: Vec<KElem> = funcs
                        .iter()
                        .enumerate()
                        .filter(|(_, &(bb, _))| bb == b)
                        .map(|(row, _)| sol[row][i].clone())
                        .collect();
                    k.poly_trim(poly)
                })
                .collect()
        })
        .collect();
    ClosedFormOrbit {
        field: k,
        bases: nonzero.into_iter().map(|(e, _)| e).collect(),
        coeffs,
        valid_from,
        complex: spec.complex,
        jordan_case: spec.jordan_case,
    }
}

impl ClosedFormOrbit {
    /// Exact value of the closed form at `n` (meaningful for `n >= valid_from`).
    pub fn eval(&self, n: u64) -> Vec<KElem> {
        let k = &self.field;
        let nq = int(n as i64);
        (0..3)
            .map(|i| {
                self.bases.iter().enumerate().fold(k.zero(), |acc, (b, base)| {
                    let c = eval_kpoly(k, &self.coeffs[i][b], &nq);
                    k.add(&acc, &k.mul(&c, &k.pow(base, n)))
                })
            })
            .collect()
    }

    /// In the complex regime, `(a_i, c_i)` with
    /// `x_i(n) = a_i λ^n + conj(a_i) conj(λ)^n + c_i ρ^n`.
    pub fn complex_coefficients(&self) -> Option<(Vec<AlgebraicNumber>, Vec<AlgebraicNumber>)> {
        if !self.complex {
            return None;
        }
        let k = &self.field;
        let get = |i: usize, b: usize| -> KElem {
            self.coeffs[i][b].first().cloned().unwrap_or_else(|| k.zero())
        };
        let a = (0..3).map(|i| k.to_algebraic(&get(i, 0))).collect();
        let c = (0..3)
            .map(|i| {
                if self.bases.len() > 2 {
                    k.to_algebraic(&get(i, 2))
                } else {
                    AlgebraicNumber::zero()
                }
            })
            .collect();
        Some((a, c))
    }
}

pub fn eval_kpoly(k: &SplittingField, p: &[KElem], x: &Rational) -> KElem {
    let xe = k.rational(x.clone());
    p.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, &xe), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::algebraic::{alg_equal, poly_complex_roots};
    use crate::numeric::rational::rat;

    fn rot_scale() -> RationalMatrix3 {
        RationalMatrix3::from_rows(vec![
            vec![rat(3, 5), rat(-4, 5), int(0)],
            vec![rat(4, 5), rat(3, 5), int(0)],
            vec![int(0), int(0), rat(1, 2)],
        ])
        .unwrap()
    }

    fn orbit(m: &RationalMatrix3, s: &[Rational], n: u64) -> Vec<Rational> {
        let mut x = s.to_vec();
        for _ in 0..n {
            x = m.apply(&x);
        }
        x
    }

    #[test]
    fn char_poly_examples() {
        let d = RationalMatrix3::from_i64([[1, 0, 0], [0, 2, 0], [0, 0, 3]]);
        assert_eq!(char_poly(&d), IntPolynomial::from_i64(&[-6, 11, -6, 1]));
        assert_eq!(char_poly(&RationalMatrix3::identity()), IntPolynomial::from_i64(&[-1, 3, -3, 1]));
        // (5x^2 - 6x + 5)(2x - 1)
        let want = IntPolynomial::from_i64(&[5, -6, 5]).mul(&IntPolynomial::from_i64(&[-1, 2]));
        assert_eq!(char_poly(&rot_scale()), want);
    }

    #[test]
    fn classify_examples() {
        let m = RationalMatrix3::from_i64([[0, -1, 0], [1, 0, 0], [0, 0, 2]]);
        match classify(&m) {
            EigenClassification::ComplexPair { lambda, rho, gamma, rou_order } => {
                assert!(alg_equal(&lambda, &AlgebraicNumber::i()));
                assert_eq!(rho.as_rational(), Some(int(2)));
                assert!(alg_equal(&gamma, &AlgebraicNumber::i()));
                assert_eq!(rou_order, Some(4));
            }
            other => panic!("{other:?}"),
        }
        match classify(&rot_scale()) {
            EigenClassification::ComplexPair { gamma, rou_order, .. } => {
                let want = poly_complex_roots(&IntPolynomial::from_i64(&[5, -6, 5]))
                    .unwrap()
                    .into_iter()
                    .find(|z| z.center().1.is_positive())
                    .unwrap();
                assert!(alg_equal(&gamma, &want));
                assert_eq!(rou_order, None);
            }
            other => panic!("{other:?}"),
        }
        let d = RationalMatrix3::from_rows(vec![
            vec![int(2), int(0), int(0)],
            vec![int(0), rat(1, 2), int(0)],
            vec![int(0), int(0), int(-1)],
        ])
        .unwrap();
        match classify(&d) {
            EigenClassification::ThreeReal { jordan_case, .. } => assert_eq!(jordan_case, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn closed_form_rotation_coefficients() {
        let m = RationalMatrix3::from_i64([[0, -1, 0], [1, 0, 0], [0, 0, 2]]);
        let sp = spectrum(&m);
        let s = vec![int(1), int(0), int(0)];
        let cf = closed_form(&m, &s, &sp);
        let (a, c) = cf.complex_coefficients().unwrap();
        assert_eq!(a[0].as_rational(), Some(rat(1, 2)));
        // a2 = -i/2
        let want = poly_complex_roots(&IntPolynomial::from_i64(&[1, 0, 4]))
            .unwrap()
            .into_iter()
            .find(|z| z.center().1.is_negative())
            .unwrap();
        assert!(alg_equal(&a[1], &want));
        assert!(a[2].is_zero());
        assert!(c.iter().all(|x| x.is_zero()));
        for n in 0..=5 {
            let v = cf.eval(n);
            let want = orbit(&m, &s, n);
            for i in 0..3 {
                assert_eq!(v[i], cf.field.rational(want[i].clone()));
            }
        }
    }

    #[test]
    fn closed_form_jordan_block() {
        let m = RationalMatrix3::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 2]]);
        let sp = spectrum(&m);
        assert_eq!(sp.jordan_case, 2);
        let s = vec![int(0), int(1), int(1)];
        let cf = closed_form(&m, &s, &sp);
        for n in 0..=20 {
            let v = cf.eval(n);
            let k = &cf.field;
            assert_eq!(v[0], k.rational(int(n as i64)));
            assert_eq!(v[1], k.one());
            assert_eq!(v[2], k.rational(int(2).pow(n as i32)));
        }
    }

    #[test]
    fn closed_form_singular_and_cubic() {
        let cases = [
            RationalMatrix3::from_i64([[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
            RationalMatrix3::from_i64([[1, 2, 0], [2, 1, 0], [0, 0, 0]]),
            // companion of x^3 - x - 1: one real root, irreducible
            RationalMatrix3::from_i64([[0, 0, 1], [1, 0, 1], [0, 1, 0]]),
            // companion of x^3 - 3x + 1: three real roots, cyclic
            RationalMatrix3::from_i64([[0, 0, -1], [1, 0, 3], [0, 1, 0]]),
            // companion of x^3 - 4x + 1: three real roots, non-square discriminant
            RationalMatrix3::from_i64([[0, 0, -1], [1, 0, 4], [0, 1, 0]]),
        ];
        let s = vec![int(1), int(-2), rat(1, 3)];
        for m in &cases {
            let sp = spectrum(m);
            let cf = closed_form(m, &s, &sp);
            for n in cf.valid_from..=50 {
                let v = cf.eval(n);
                let want = orbit(m, &s, n);
                for i in 0..3 {
                    assert_eq!(v[i], cf.field.rational(want[i].clone()), "{m:?} n={n}");
                }
            }
        }
    }
}
