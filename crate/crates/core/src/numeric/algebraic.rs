//! Algebraic numbers in standard form: an irreducible primitive integer
//! polynomial plus a disk that isolates one of its roots.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::factor::irreducible_factors;
use super::interval::{CInterval, ComplexBall, RInterval};
use super::poly::{bivariate_resultant, IntPolynomial, QPoly};
use super::rational::{int, pow2, rational_bits, sqrt_interval, Rational};
use super::roots::{isolate_roots, mignotte_separation};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    min_poly: IntPolynomial,
    center: (Rational, Rational),
    radius: Rational,
    /// Quarter of the separation bound of `min_poly`; zero for rationals.
    quarter_sep: Rational,
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.approx();
        write!(f, "Alg({re:.6}{im:+.6}i; {})", self.min_poly)
    }
}

fn quarter_sep(p: &IntPolynomial) -> Rational {
    match mignotte_separation(p) {
        Some(s) => s / int(4),
        None => Rational::zero(),
    }
}

fn shrink_eps(q: &Rational) -> Rational {
    // strictly below the quarter separation
    q * Rational::new(BigInt::from(15), BigInt::from(16))
}

impl AlgebraicNumber {
    pub fn from_rational(q: Rational) -> Self {
        AlgebraicNumber {
            min_poly: IntPolynomial::linear_for(&q),
            center: (q, Rational::zero()),
            radius: Rational::zero(),
            quarter_sep: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        poly_complex_roots(&IntPolynomial::from_i64(&[1, 0, 1]))
            .unwrap()
            .into_iter()
            .find(|a| a.center.1.is_positive())
            .unwrap()
    }

    fn from_ball(min_poly: IntPolynomial, ball: ComplexBall, quarter_sep: Rational) -> Self {
        AlgebraicNumber {
            min_poly,
            center: ball.center,
            radius: ball.radius,
            quarter_sep,
        }
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.min_poly
    }

    pub fn center(&self) -> &(Rational, Rational) {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree()
    }

    pub fn ball(&self) -> ComplexBall {
        ComplexBall {
            center: self.center.clone(),
            radius: self.radius.clone(),
        }
    }

    /// Real numbers are stored with a disk centred on the real axis.
    pub fn is_real(&self) -> bool {
        self.center.1.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.degree() == 1 {
            let c = self.min_poly.coeffs();
            Some(Rational::new(-c[0].clone(), c[1].clone()))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    pub fn approx(&self) -> (f64, f64) {
        use super::interval::to_f64;
        (to_f64(&self.center.0), to_f64(&self.center.1))
    }

    /// Representation size: coefficient bits of the minimal polynomial plus
    /// the bits of the isolating disk's rationals.
    pub fn size_bits(&self) -> u64 {
        self.min_poly.size_bits()
            + rational_bits(&self.center.0)
            + rational_bits(&self.center.1)
            + rational_bits(&self.radius)
    }

    /// A copy whose disk has radius at most `eps`.
    pub fn refined(&self, eps: &Rational) -> Self {
        if &self.radius <= eps {
            return self.clone();
        }
        let mut cur = self.clone();
        // Newton steps with the inclusion radius d·|p/p'|
        let d = int(self.degree() as i64);
        let dp = self.min_poly.derivative();
        let prec_for = |e: &Rational| -> u32 {
            let bits = e.denom().bits().saturating_sub(e.numer().bits());
            (bits as u32) * 2 + 32
        };
        let prec = prec_for(eps);
        for _ in 0..64 {
            let z = CInterval::point(cur.center.0.clone(), cur.center.1.clone());
            let pz = self.min_poly.eval_complex(&z);
            let dpz = dp.eval_complex(&z);
            let (pz, dpz) = (point_of(&pz), point_of(&dpz));
            let n_d = &dpz.0 * &dpz.0 + &dpz.1 * &dpz.1;
            if n_d.is_zero() {
                break;
            }
            // w = p/p'
            let w = (
                (&pz.0 * &dpz.0 + &pz.1 * &dpz.1) / &n_d,
                (&pz.1 * &dpz.0 - &pz.0 * &dpz.1) / &n_d,
            );
            let mut nc = (&cur.center.0 - &w.0, &cur.center.1 - &w.1);
            if self.is_real() {
                nc.1 = Rational::zero();
            }
            nc = (
                super::rational::floor_dyadic(&nc.0, prec),
                super::rational::floor_dyadic(&nc.1, prec),
            );
            let zc = CInterval::point(nc.0.clone(), nc.1.clone());
            let (pn, dn) = (
                point_of(&self.min_poly.eval_complex(&zc)),
                point_of(&dp.eval_complex(&zc)),
            );
            let dn2 = &dn.0 * &dn.0 + &dn.1 * &dn.1;
            if dn2.is_zero() {
                break;
            }
            let pn2 = &pn.0 * &pn.0 + &pn.1 * &pn.1;
            // root within d·|p/p'| of nc
            let rad = &d * super::rational::sqrt_upper_rel(&(pn2 / dn2));
            let dist = super::rational::sqrt_upper_rel(
                &((&nc.0 - &cur.center.0).pow(2) + (&nc.1 - &cur.center.1).pow(2)),
            );
            if &dist + &rad <= cur.radius {
                cur.center = nc;
                cur.radius = rad;
                if &cur.radius <= eps {
                    return cur;
                }
            } else {
                break;
            }
        }
        // fall back to re-isolating every root
        let target = if eps < &cur.radius { eps.clone() } else { cur.radius.clone() };
        let target = if target < self.quarter_sep { target } else { shrink_eps(&self.quarter_sep) };
        let balls = isolate_roots(&self.min_poly, &target);
        let mine = self.ball();
        let hit: Vec<ComplexBall> = balls.into_iter().filter(|b| !b.disjoint(&mine)).collect();
        assert_eq!(hit.len(), 1, "refinement lost the isolated root");
        let mut out = self.clone();
        out.center = hit[0].center.clone();
        out.radius = hit[0].radius.clone();
        if &out.radius > eps {
            return out.refined(eps);
        }
        out
    }

    /// Ball of radius at most `eps` containing the number.
    pub fn refine(&self, eps: &Rational) -> ComplexBall {
        self.refined(eps).ball()
    }

    /// Box enclosure of width at most `2^(1-prec)`.
    pub fn enclosure(&self, prec: u32) -> CInterval {
        let eps = Rational::new(BigInt::one(), pow2(prec));
        let b = self.refine(&eps);
        if self.is_real() {
            CInterval::real(RInterval::new(
                &b.center.0 - &b.radius,
                &b.center.0 + &b.radius,
            ))
        } else {
            b.to_box()
        }
    }
}

fn point_of(c: &CInterval) -> (Rational, Rational) {
    (c.re.lo.clone(), c.im.lo.clone())
}

fn roots_of_irreducible(q: &IntPolynomial) -> Vec<AlgebraicNumber> {
    if q.degree() == 1 {
        let c = q.coeffs();
        return vec![AlgebraicNumber::from_rational(Rational::new(
            -c[0].clone(),
            c[1].clone(),
        ))];
    }
    let qs = quarter_sep(q);
    isolate_roots(q, &shrink_eps(&qs))
        .into_iter()
        .map(|b| AlgebraicNumber::from_ball(q.clone(), b, qs.clone()))
        .collect()
}

/// All distinct complex roots of `p`.
pub fn poly_complex_roots(p: &IntPolynomial) -> Result<Vec<AlgebraicNumber>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial has no isolated roots".into()));
    }
    if p.degree() == 0 {
        return Ok(vec![]);
    }
    Ok(irreducible_factors(p)
        .iter()
        .flat_map(roots_of_irreducible)
        .collect())
}

/// All distinct real roots of `p`, ascending.
pub fn poly_real_roots(p: &IntPolynomial) -> Result<Vec<AlgebraicNumber>> {
    let mut r: Vec<AlgebraicNumber> = poly_complex_roots(p)?
        .into_iter()
        .filter(|a| a.is_real())
        .collect();
    r.sort_by(real_cmp);
    Ok(r)
}

/// Picks the unique root of `poly` inside the enclosures produced by
/// `enclose(prec)` as `prec` grows.
pub(crate) fn identify(poly: &IntPolynomial, enclose: impl Fn(u32) -> CInterval) -> AlgebraicNumber {
    let mut cands: Vec<AlgebraicNumber> = irreducible_factors(poly)
        .iter()
        .flat_map(roots_of_irreducible)
        .collect();
    let mut prec = 16;
    loop {
        let b = enclose(prec);
        let eps = Rational::new(BigInt::one(), pow2(prec));
        cands = cands
            .into_iter()
            .map(|c| c.refined(&eps))
            .filter(|c| {
                let cb = if c.is_real() {
                    CInterval::real(RInterval::new(
                        &c.center.0 - &c.radius,
                        &c.center.0 + &c.radius,
                    ))
                } else {
                    c.ball().to_box()
                };
                cb.overlaps(&b)
            })
            .collect();
        assert!(!cands.is_empty(), "no candidate root matched the enclosure");
        if cands.len() == 1 {
            return cands.pop().unwrap();
        }
        prec *= 2;
    }
}

/// Coefficients in `y` of `p(x - y)`, each a polynomial in `x`.
fn shifted(p: &IntPolynomial) -> Vec<QPoly> {
    // p(x - y) = sum_i c_i (x - y)^i
    let d = p.degree();
    let mut out = vec![QPoly::zero(); d + 1];
    let mut binom = vec![BigInt::one()];
    for (i, c) in p.coeffs().iter().enumerate() {
        if i > 0 {
            let mut next = vec![BigInt::one(); i + 1];
            for k in 1..i {
                next[k] = &binom[k - 1] + &binom[k];
            }
            binom = next;
        }
        // (x - y)^i = sum_k C(i,k) x^{i-k} (-y)^k
        for k in 0..=i {
            let mut coef = c * &binom[k];
            if k % 2 == 1 {
                coef = -coef;
            }
            let mut mono = vec![Rational::zero(); i - k + 1];
            mono[i - k] = Rational::from_integer(coef);
            out[k] = out[k].add(&QPoly::new(mono));
        }
    }
    out
}

fn exact_result(poly: QPoly, enclose: impl Fn(u32) -> CInterval) -> AlgebraicNumber {
    let ip = IntPolynomial::from_q(&poly);
    identify(&ip, enclose)
}

pub fn alg_neg(a: &AlgebraicNumber) -> AlgebraicNumber {
    let mut out = a.clone();
    out.min_poly = a.min_poly.reflect().primitive();
    out.center = (-a.center.0.clone(), -a.center.1.clone());
    out
}

pub fn alg_conj(a: &AlgebraicNumber) -> AlgebraicNumber {
    let mut out = a.clone();
    out.center.1 = -a.center.1.clone();
    out
}

pub fn alg_add(a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return AlgebraicNumber::from_rational(x + y);
    }
    let r = bivariate_resultant(&a.min_poly.to_q(), &shifted(&b.min_poly));
    exact_result(r, |prec| &a.enclosure(prec + 1) + &b.enclosure(prec + 1))
}

pub fn alg_sub(a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
    alg_add(a, &alg_neg(b))
}

pub fn alg_mul(a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
    if a.is_zero() || b.is_zero() {
        return AlgebraicNumber::zero();
    }
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return AlgebraicNumber::from_rational(x * y);
    }
    // y^m q(x/y) = sum_i q_i x^i y^{m-i}
    let m = b.min_poly.degree();
    let mut coeffs = vec![QPoly::zero(); m + 1];
    for (i, c) in b.min_poly.coeffs().iter().enumerate() {
        let mut mono = vec![Rational::zero(); i + 1];
        mono[i] = Rational::from_integer(c.clone());
        coeffs[m - i] = QPoly::new(mono);
    }
    let r = bivariate_resultant(&a.min_poly.to_q(), &coeffs);
    exact_result(r, |prec| {
        let ea = a.enclosure(prec + 2);
        let eb = b.enclosure(prec + 2);
        &ea * &eb
    })
}

pub fn alg_inv(a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if a.is_zero() {
        return Err(Error::Domain("inverse of zero".into()));
    }
    if let Some(x) = a.as_rational() {
        return Ok(AlgebraicNumber::from_rational(x.recip()));
    }
    let rev = a.min_poly.reversed().primitive();
    Ok(identify(&rev, |prec| {
        let mut p = prec;
        loop {
            if let Some(r) = a.enclosure(p).recip() {
                if r.max_width() <= Rational::new(BigInt::one(), pow2(prec)) || p > prec + 256 {
                    return r;
                }
            }
            p += 8;
        }
    }))
}

pub fn alg_div(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    Ok(alg_mul(a, &alg_inv(b)?))
}

/// `a^k` via `Res_y(p(y), x - y^k)`.
pub fn alg_pow(a: &AlgebraicNumber, k: u32) -> AlgebraicNumber {
    if k == 0 {
        return AlgebraicNumber::one();
    }
    if let Some(x) = a.as_rational() {
        return AlgebraicNumber::from_rational(super::poly::pow_rat(&x, k as usize));
    }
    let m = a.min_poly.to_q();
    let mut acc = QPoly::one();
    let mut base = QPoly::x().rem(&m);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).rem(&m);
        }
        base = base.mul(&base).rem(&m);
        e >>= 1;
    }
    alg_eval_qpoly(&acc, a)
}

/// `r(a)` for a rational polynomial `r`.
pub fn alg_eval_qpoly(r: &QPoly, a: &AlgebraicNumber) -> AlgebraicNumber {
    if r.degree() == 0 {
        return AlgebraicNumber::from_rational(r.coeff(0));
    }
    if let Some(x) = a.as_rational() {
        return AlgebraicNumber::from_rational(r.eval(&x));
    }
    let reduced = r.rem(&a.min_poly.to_q());
    if reduced.degree() < r.degree() {
        return alg_eval_qpoly(&reduced, a);
    }
    // coefficients in y of x - r(y)
    let mut coeffs: Vec<QPoly> = r.coeffs().iter().map(|c| QPoly::constant(-c.clone())).collect();
    coeffs[0] = coeffs[0].add(&QPoly::x());
    let res = bivariate_resultant(&a.min_poly.to_q(), &coeffs);
    let rq = r.clone();
    exact_result(res, move |prec| {
        let e = a.enclosure(prec + 4 * rq.degree() as u32 + 16);
        let mut acc = CInterval::point(Rational::zero(), Rational::zero());
        for c in rq.coeffs().iter().rev() {
            acc = &(&acc * &e) + &CInterval::point(c.clone(), Rational::zero());
        }
        acc
    })
}

/// Non-negative square root of a non-negative real number.
pub fn alg_sqrt(a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if !a.is_real() || alg_sign(a)? < 0 {
        return Err(Error::Domain("square root of a non-real or negative number".into()));
    }
    if a.is_zero() {
        return Ok(AlgebraicNumber::zero());
    }
    // p(x^2)
    let c = a.min_poly.coeffs();
    let mut sq = vec![BigInt::zero(); 2 * c.len() - 1];
    for (i, v) in c.iter().enumerate() {
        sq[2 * i] = v.clone();
    }
    let p2 = IntPolynomial::new(sq);
    Ok(identify(&p2, |prec| {
        let e = a.enclosure(2 * prec + 8);
        let mut s = sqrt_interval(&e.re, prec + 4);
        if s.lo.is_negative() {
            s.lo = Rational::zero();
        }
        CInterval::real(s)
    }))
}

pub fn alg_abs(a: &AlgebraicNumber) -> AlgebraicNumber {
    if a.is_real() {
        return if alg_sign(a).unwrap() < 0 { alg_neg(a) } else { a.clone() };
    }
    let n = alg_mul(a, &alg_conj(a));
    alg_sqrt(&n).expect("norm is non-negative")
}

pub fn alg_re(a: &AlgebraicNumber) -> AlgebraicNumber {
    if a.is_real() {
        return a.clone();
    }
    let s = alg_add(a, &alg_conj(a));
    alg_mul(&s, &AlgebraicNumber::from_rational(Rational::new(BigInt::one(), BigInt::from(2))))
}

pub fn alg_im(a: &AlgebraicNumber) -> AlgebraicNumber {
    if a.is_real() {
        return AlgebraicNumber::zero();
    }
    // (a - conj a) / (2i) = (conj a - a) * i / 2
    let d = alg_sub(&alg_conj(a), a);
    let half_i = alg_mul(
        &AlgebraicNumber::i(),
        &AlgebraicNumber::from_rational(Rational::new(BigInt::one(), BigInt::from(2))),
    );
    alg_mul(&d, &half_i)
}

/// Exact sign of a real algebraic number.
pub fn alg_sign(a: &AlgebraicNumber) -> Result<i32> {
    if !a.is_real() {
        return Err(Error::Domain("sign of a non-real number".into()));
    }
    if let Some(x) = a.as_rational() {
        return Ok(super::rational::sign_of(&(x.numer().clone())));
    }
    // irreducible of degree > 1: never zero, so refinement terminates
    let mut prec = 8;
    loop {
        let e = a.enclosure(prec);
        if let Some(s) = e.re.sign() {
            return Ok(s);
        }
        prec *= 2;
    }
}

fn real_cmp(a: &AlgebraicNumber, b: &AlgebraicNumber) -> std::cmp::Ordering {
    if alg_equal(a, b) {
        return std::cmp::Ordering::Equal;
    }
    let mut prec = 8;
    loop {
        let ea = a.enclosure(prec).re;
        let eb = b.enclosure(prec).re;
        if ea.hi < eb.lo {
            return std::cmp::Ordering::Less;
        }
        if eb.hi < ea.lo {
            return std::cmp::Ordering::Greater;
        }
        prec *= 2;
    }
}

/// Exact equality of two algebraic numbers.
pub fn alg_equal(a: &AlgebraicNumber, b: &AlgebraicNumber) -> bool {
    if a.min_poly != b.min_poly {
        return false;
    }
    if a.degree() == 1 {
        return true;
    }
    // both disks are below a quarter of the separation of the shared polynomial
    !a.ball().disjoint(&b.ball())
}

/// Smallest `d <= 144` with `g^d = 1`, checked by exact powering in `Q(g)`.
pub fn is_root_of_unity(g: &AlgebraicNumber) -> Result<Option<u32>> {
    if !alg_equal(&alg_abs(g), &AlgebraicNumber::one()) {
        return Err(Error::Domain("root-of-unity test needs |g| = 1".into()));
    }
    let m = g.min_poly.to_q();
    let x = QPoly::x();
    let mut pw = QPoly::one();
    for d in 1..=144u32 {
        pw = pw.mul(&x).rem(&m);
        if pw == QPoly::one() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}
