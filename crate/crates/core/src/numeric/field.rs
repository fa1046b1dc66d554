//! The splitting field of a rational cubic, presented as `K = F(δ)` with
//! `F = Q(θ)` for a real root `θ` of an irreducible factor of degree 1 or 3
//! and `δ² = D ∈ Q`.
//!
//! Elements are pairs `u + v·δ` with `u, v ∈ F` reduced modulo the minimal
//! polynomial of `θ`. Arithmetic is exact; signs and enclosures come from a
//! cached isolating interval for `θ`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::algebraic::{identify, AlgebraicNumber};
use super::interval::{CInterval, RInterval};
use super::matrix::charpoly;
use super::poly::{bivariate_resultant, IntPolynomial, QPoly};
use super::rational::{pow2, sqrt_interval, sqrt_lower, sqrt_upper, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElem {
    u: QPoly,
    v: QPoly,
}

impl std::fmt::Debug for KElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.v.is_zero() {
            write!(f, "[{:?}]", self.u)
        } else {
            write!(f, "[{:?} + ({:?})·δ]", self.u, self.v)
        }
    }
}

impl KElem {
    pub fn u(&self) -> &QPoly {
        &self.u
    }

    pub fn v(&self) -> &QPoly {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// The value if it is a rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.v.is_zero() && self.u.degree() == 0 {
            Some(self.u.coeff(0))
        } else {
            None
        }
    }
}

pub struct SplittingField {
    m: QPoly,
    theta: Mutex<AlgebraicNumber>,
    disc: Rational,
    /// `√D` when it is rational; then `δ` never appears symbolically.
    delta_rational: Option<Rational>,
}

impl std::fmt::Debug for SplittingField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Q(θ)(√{}) with θ root of {:?}", self.disc, self.m)
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

impl SplittingField {
    /// `theta` must be a real root of the irreducible `m_theta` (degree 1 or
    /// 3); `disc` is the square of the adjoined `δ`.
    pub fn new(theta: AlgebraicNumber, disc: Rational) -> Self {
        assert!(theta.is_real(), "θ must be real");
        let m = theta.min_poly().to_q().monic();
        SplittingField {
            m,
            theta: Mutex::new(theta),
            delta_rational: rational_sqrt(&disc),
            disc,
        }
    }

    /// The field `Q` itself.
    pub fn rationals() -> Self {
        Self::new(AlgebraicNumber::zero(), Rational::one())
    }

    pub fn theta_degree(&self) -> usize {
        self.m.degree()
    }

    pub fn has_delta(&self) -> bool {
        self.delta_rational.is_none()
    }

    pub fn disc(&self) -> &Rational {
        &self.disc
    }

    /// Degree of the field over the rationals.
    pub fn degree(&self) -> usize {
        self.m.degree() * if self.has_delta() { 2 } else { 1 }
    }

    pub fn theta(&self) -> AlgebraicNumber {
        self.theta.lock().unwrap().clone()
    }

    fn reduce(&self, p: QPoly) -> QPoly {
        if p.degree() < self.m.degree() {
            p
        } else {
            p.rem(&self.m)
        }
    }

    pub fn zero(&self) -> KElem {
        KElem {
            u: QPoly::zero(),
            v: QPoly::zero(),
        }
    }

    pub fn one(&self) -> KElem {
        self.rational(Rational::one())
    }

    pub fn rational(&self, q: Rational) -> KElem {
        KElem {
            u: QPoly::constant(q),
            v: QPoly::zero(),
        }
    }

    pub fn from_f(&self, u: QPoly) -> KElem {
        KElem {
            u: self.reduce(u),
            v: QPoly::zero(),
        }
    }

    pub fn theta_elem(&self) -> KElem {
        self.from_f(QPoly::x())
    }

    pub fn delta(&self) -> KElem {
        match &self.delta_rational {
            Some(r) => self.rational(r.clone()),
            None => KElem {
                u: QPoly::zero(),
                v: QPoly::one(),
            },
        }
    }

    pub fn add(&self, a: &KElem, b: &KElem) -> KElem {
        KElem {
            u: a.u.add(&b.u),
            v: a.v.add(&b.v),
        }
    }

    pub fn sub(&self, a: &KElem, b: &KElem) -> KElem {
        KElem {
            u: a.u.sub(&b.u),
            v: a.v.sub(&b.v),
        }
    }

    pub fn neg(&self, a: &KElem) -> KElem {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &KElem, q: &Rational) -> KElem {
        KElem {
            u: a.u.scale(q),
            v: a.v.scale(q),
        }
    }

    pub fn mul(&self, a: &KElem, b: &KElem) -> KElem {
        let uu = a.u.mul(&b.u);
        let u = if a.v.is_zero() || b.v.is_zero() {
            uu
        } else {
            uu.add(&a.v.mul(&b.v).scale(&self.disc))
        };
        let v = a.u.mul(&b.v).add(&a.v.mul(&b.u));
        KElem {
            u: self.reduce(u),
            v: self.reduce(v),
        }
    }

    pub fn pow(&self, a: &KElem, mut e: u64) -> KElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn f_inv(&self, u: &QPoly) -> QPoly {
        let (g, s, _) = u.ext_gcd(&self.m);
        debug_assert!(g.degree() == 0, "non-invertible element of F");
        self.reduce(s)
    }

    pub fn inv(&self, a: &KElem) -> Result<KElem> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero in the splitting field".into()));
        }
        // (u - vδ) / (u² - D v²)
        let n = self.reduce(a.u.mul(&a.u).sub(&a.v.mul(&a.v).scale(&self.disc)));
        let ni = self.f_inv(&n);
        Ok(KElem {
            u: self.reduce(a.u.mul(&ni)),
            v: self.reduce(a.v.mul(&ni).scale(&-Rational::one())),
        })
    }

    pub fn div(&self, a: &KElem, b: &KElem) -> Result<KElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The automorphism `δ ↦ −δ` fixing `F`.
    pub fn sigma(&self, a: &KElem) -> KElem {
        KElem {
            u: a.u.clone(),
            v: a.v.scale(&-Rational::one()),
        }
    }

    /// Complex conjugation: `σ` when `D < 0`, the identity otherwise.
    pub fn conj(&self, a: &KElem) -> KElem {
        if self.disc.is_negative() {
            self.sigma(a)
        } else {
            a.clone()
        }
    }

    pub fn is_real(&self, a: &KElem) -> bool {
        !self.disc.is_negative() || a.v.is_zero()
    }

    fn theta_interval(&self, prec: u32) -> RInterval {
        let mut t = self.theta.lock().unwrap();
        let eps = Rational::new(BigInt::one(), pow2(prec));
        if t.radius() > &eps {
            *t = t.refined(&eps);
        }
        t.enclosure(prec).re
    }

    fn enclose_at(&self, a: &KElem, p: u32) -> CInterval {
        let th = if self.m.degree() <= 1 {
            RInterval::point(-self.m.coeff(0))
        } else {
            self.theta_interval(p)
        };
        let horner = |q: &QPoly| {
            let mut acc = RInterval::zero();
            for c in q.coeffs().iter().rev() {
                acc = (&(&acc * &th) + &RInterval::point(c.clone())).round(p + 8);
            }
            acc
        };
        let u = horner(&a.u);
        if a.v.is_zero() {
            return CInterval::real(u);
        }
        let v = horner(&a.v);
        let root = sqrt_interval(&RInterval::point(self.disc.abs()), p + 8);
        let vd = &v * &root;
        if self.disc.is_negative() {
            CInterval::new(u, vd)
        } else {
            CInterval::real(&u + &vd)
        }
    }

    /// Box of width at most `2^-prec` around the complex value of `a`.
    pub fn enclosure(&self, a: &KElem, prec: u32) -> CInterval {
        let target = Rational::new(BigInt::one(), pow2(prec));
        let mut p = prec + 16;
        loop {
            let e = self.enclose_at(a, p);
            if e.max_width() <= target {
                return e;
            }
            p = p * 3 / 2 + 16;
        }
    }

    /// Exact sign of a real element.
    pub fn sign(&self, a: &KElem) -> i32 {
        debug_assert!(self.is_real(a));
        if a.is_zero() {
            return 0;
        }
        if let Some(q) = a.as_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let mut prec = 16;
        loop {
            if let Some(s) = self.enclosure(a, prec).re.sign() {
                return s;
            }
            prec *= 2;
        }
    }

    pub fn cmp_real(&self, a: &KElem, b: &KElem) -> std::cmp::Ordering {
        self.sign(&self.sub(a, b)).cmp(&0)
    }

    /// `|a|²` as an element of the field.
    pub fn norm_sqr(&self, a: &KElem) -> KElem {
        self.mul(a, &self.conj(a))
    }

    /// Rational upper bound on `|a|`.
    pub fn abs_upper(&self, a: &KElem) -> Rational {
        if a.is_zero() {
            return Rational::zero();
        }
        let e = self.enclosure(a, 32);
        let r = std::cmp::max(e.re.lo.abs(), e.re.hi.abs());
        let i = std::cmp::max(e.im.lo.abs(), e.im.hi.abs());
        sqrt_upper(&(&r * &r + &i * &i), 40)
    }

    /// Positive rational lower bound on `|a|` for nonzero `a`.
    pub fn abs_lower(&self, a: &KElem) -> Rational {
        assert!(!a.is_zero(), "no positive lower bound for zero");
        let mut prec = 16;
        loop {
            let n = self.enclosure(&self.norm_sqr(a), prec).re;
            if n.lo.is_positive() {
                return sqrt_lower(&n.lo, prec + 8);
            }
            prec *= 2;
        }
    }

    /// Coordinates of `a` over the basis `θ^i, θ^i·δ`.
    fn coords(&self, a: &KElem) -> Vec<Rational> {
        let n = self.m.degree();
        let mut out: Vec<Rational> = (0..n).map(|i| a.u.coeff(i)).collect();
        if self.has_delta() {
            out.extend((0..n).map(|i| a.v.coeff(i)));
        }
        out
    }

    fn basis(&self) -> Vec<KElem> {
        let n = self.m.degree();
        let mut out: Vec<KElem> = (0..n)
            .map(|i| self.from_f(QPoly::x().pow(i as u32)))
            .collect();
        if self.has_delta() {
            let d = self.delta();
            let more: Vec<KElem> = out.iter().map(|b| self.mul(b, &d)).collect();
            out.extend(more);
        }
        out
    }

    /// Characteristic polynomial of multiplication by `a` over the rationals.
    pub fn charpoly_of(&self, a: &KElem) -> QPoly {
        let basis = self.basis();
        let cols: Vec<Vec<Rational>> = basis.iter().map(|b| self.coords(&self.mul(a, b))).collect();
        let n = basis.len();
        let mat: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        charpoly(&mat)
    }

    /// The element as a standalone algebraic number.
    pub fn to_algebraic(&self, a: &KElem) -> AlgebraicNumber {
        if let Some(q) = a.as_rational() {
            return AlgebraicNumber::from_rational(q);
        }
        let cp = IntPolynomial::from_q(&self.charpoly_of(a));
        let real = self.is_real(a);
        identify(&cp, |prec| {
            let e = self.enclosure(a, prec);
            if real {
                CInterval::real(e.re)
            } else {
                e
            }
        })
    }

    // Polynomials with coefficients in the field, lowest degree first.

    pub fn poly_trim(&self, mut p: Vec<KElem>) -> Vec<KElem> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn poly_mul(&self, a: &[KElem], b: &[KElem]) -> Vec<KElem> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.poly_trim(out)
    }

    fn poly_rem(&self, a: &[KElem], b: &[KElem]) -> Vec<KElem> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = self.inv(b.last().unwrap()).unwrap();
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = self.mul(r.last().unwrap(), &inv);
            for (j, y) in b.iter().enumerate() {
                r[k + j] = self.sub(&r[k + j], &self.mul(&c, y));
            }
            r = self.poly_trim(r);
        }
        r
    }

    /// Monic gcd over the field.
    pub fn poly_gcd(&self, a: &[KElem], b: &[KElem]) -> Vec<KElem> {
        let mut a = self.poly_trim(a.to_vec());
        let mut b = self.poly_trim(b.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            return a;
        }
        let inv = self.inv(a.last().unwrap()).unwrap();
        a.iter().map(|c| self.mul(c, &inv)).collect()
    }

    /// `∏` of all conjugates of `g` over the rationals, as a rational polynomial.
    pub fn poly_norm(&self, g: &[KElem]) -> QPoly {
        let g = self.poly_trim(g.to_vec());
        let h: Vec<KElem> = if self.has_delta() {
            let s: Vec<KElem> = g.iter().map(|c| self.sigma(c)).collect();
            self.poly_mul(&g, &s)
        } else {
            g
        };
        debug_assert!(h.iter().all(|c| c.v.is_zero()));
        if self.m.degree() <= 1 {
            return QPoly::new(h.iter().map(|c| c.u.coeff(0)).collect());
        }
        // Res_y(m(y), Σ_k h_k(y) x^k), coefficients grouped by powers of y
        let dy = self.m.degree();
        let mut by_y = vec![QPoly::zero(); dy];
        for (k, c) in h.iter().enumerate() {
            for j in 0..dy {
                let coef = c.u.coeff(j);
                if coef.is_zero() {
                    continue;
                }
                let mut mono = vec![Rational::zero(); k + 1];
                mono[k] = coef;
                by_y[j] = by_y[j].add(&QPoly::new(mono));
            }
        }
        while by_y.last().is_some_and(|c| c.is_zero()) {
            by_y.pop();
        }
        if by_y.len() <= 1 {
            // coefficients lie in Q
            let c = by_y.pop().unwrap_or_else(QPoly::zero);
            return c.pow(dy as u32);
        }
        bivariate_resultant(&self.m, &by_y)
    }

    /// Enclosure of `p(z)` for a box `z`.
    pub fn poly_eval_enclosure(&self, p: &[KElem], z: &CInterval, prec: u32) -> CInterval {
        let mut acc = CInterval::point(Rational::zero(), Rational::zero());
        for c in p.iter().rev() {
            acc = &(&acc * z) + &self.enclosure(c, prec);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::algebraic::{alg_equal, poly_real_roots};
    use crate::numeric::rational::{int, rat};

    fn cubic_field() -> SplittingField {
        // x^3 - 2: one real root, discriminant -108
        let theta = poly_real_roots(&IntPolynomial::from_i64(&[-2, 0, 0, 1])).unwrap().remove(0);
        SplittingField::new(theta, int(-108))
    }

    #[test]
    fn inverse_and_conjugation() {
        let k = cubic_field();
        let a = k.add(&k.theta_elem(), &k.mul(&k.delta(), &k.rational(rat(1, 3))));
        let ai = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &ai), k.one());
        assert!(!k.is_real(&a));
        assert!(k.is_real(&k.norm_sqr(&a)));
        assert_eq!(k.sign(&k.norm_sqr(&a)), 1);
    }

    #[test]
    fn theta_cubed_is_two() {
        let k = cubic_field();
        let t = k.theta_elem();
        assert_eq!(k.pow(&t, 3), k.rational(int(2)));
        let alg = k.to_algebraic(&t);
        assert!(alg_equal(&alg, &k.theta()));
    }

    #[test]
    fn norm_of_linear_polynomial() {
        // over K of degree 6 the norm of (x - θ) is (x^3 - 2)^2
        let k = cubic_field();
        let g = vec![k.neg(&k.theta_elem()), k.one()];
        let m = IntPolynomial::from_i64(&[-2, 0, 0, 1]).to_q();
        assert_eq!(k.poly_norm(&g), m.mul(&m));
    }

    #[test]
    fn rational_square_discriminant_folds_delta() {
        let k = SplittingField::new(AlgebraicNumber::zero(), int(49));
        assert!(!k.has_delta());
        assert_eq!(k.delta(), k.rational(int(7)));
        assert_eq!(k.degree(), 1);
    }
}
