use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numeric::algebraic::{poly_complex_roots, AlgebraicNumber};
use crate::numeric::factor::factor;
use crate::numeric::field::{KElem, SplittingField};
use crate::numeric::interval::{CInterval, RInterval};
use crate::numeric::poly::IntPolynomial;
use crate::numeric::rational::{pow2, Rational};
use crate::{Error, Result};

/// `f(z) = Σ_m β_m z^m + conj(β_m) conj(z)^m`, real on the unit circle.
#[derive(Clone, Debug)]
pub struct DominantFunction {
    pub field: Arc<SplittingField>,
    pub betas: Vec<KElem>,
}

impl DominantFunction {
    pub fn k(&self) -> usize {
        self.betas.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.betas.iter().all(|b| b.is_zero())
    }

    /// Enclosure of `f(z)` for `z` on the unit circle.
    pub fn eval_enclosure(&self, z: &CInterval, prec: u32) -> RInterval {
        self.derivative_enclosure(z, 0, prec)
    }

    /// Enclosure of `d^j/dφ^j f(e^{iφ}) = 2 Re Σ β_m (im)^j z^m` at `z = e^{iφ}`.
    pub fn derivative_enclosure(&self, z: &CInterval, j: u32, prec: u32) -> RInterval {
        let k = &self.field;
        let mut acc = CInterval::point(Rational::zero(), Rational::zero());
        let mut zm = CInterval::point(Rational::one(), Rational::zero());
        for (m, b) in self.betas.iter().enumerate() {
            if m > 0 {
                zm = &zm * z;
            }
            if b.is_zero() || (j > 0 && m == 0) {
                continue;
            }
            let mj = Rational::from_integer(num_traits::pow(BigInt::from(m), j as usize));
            // i^j
            let (re, im) = match j % 4 {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            let unit = CInterval::point(Rational::from_integer(re.into()), Rational::from_integer(im.into()));
            let t = &(&k.enclosure(b, prec) * &zm) * &unit;
            acc = &acc + &t.scale(&mj);
        }
        let two = Rational::from_integer(BigInt::from(2));
        acc.re.scale(&two)
    }

    /// `g(z) = z^k f(z)` on the circle, as a polynomial over the field.
    pub fn circle_polynomial(&self) -> Vec<KElem> {
        let k = &self.field;
        let kk = self.k();
        let mut g = vec![k.zero(); 2 * kk + 1];
        for (m, b) in self.betas.iter().enumerate() {
            g[kk + m] = k.add(&g[kk + m], b);
            g[kk - m] = k.add(&g[kk - m], &k.conj(b));
        }
        k.poly_trim(g)
    }

    /// Sum of `|β_m| m^j` over `m`, doubled: an upper bound on the `j`-th
    /// angular derivative.
    pub fn derivative_bound(&self, j: u32) -> Rational {
        let k = &self.field;
        let mut s = Rational::zero();
        for (m, b) in self.betas.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            s += k.abs_upper(b) * Rational::from_integer(num_traits::pow(BigInt::from(m), j as usize));
        }
        s * Rational::from_integer(BigInt::from(2))
    }
}

fn k_derivative(k: &SplittingField, p: &[KElem]) -> Vec<KElem> {
    let out = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.scale(c, &Rational::from_integer(BigInt::from(i))))
        .collect();
    k.poly_trim(out)
}

fn as_k_poly(k: &SplittingField, q: &IntPolynomial) -> Vec<KElem> {
    q.coeffs()
        .iter()
        .map(|c| k.rational(Rational::from_integer(c.clone())))
        .collect()
}

/// For the roots of the irreducible `q`, which are roots of `h`.
pub(crate) fn roots_of_among(
    k: &SplittingField,
    h: &[KElem],
    q: &IntPolynomial,
    roots: &mut [AlgebraicNumber],
) -> Vec<bool> {
    let common = k.poly_gcd(h, &as_k_poly(k, q));
    let want = common.len().saturating_sub(1);
    if want == 0 {
        return vec![false; roots.len()];
    }
    if want == roots.len() {
        return vec![true; roots.len()];
    }
    let mut prec = 32;
    loop {
        let mut hits = Vec::with_capacity(roots.len());
        for r in roots.iter_mut() {
            *r = r.refined(&Rational::new(BigInt::one(), pow2(prec)));
            let z = r.enclosure(prec);
            hits.push(k.poly_eval_enclosure(&common, &z, prec + 8).contains_zero());
        }
        if hits.iter().filter(|&&x| x).count() == want {
            return hits;
        }
        prec *= 2;
        assert!(prec < 1 << 16, "root selection did not resolve");
    }
}

fn self_reciprocal(q: &IntPolynomial) -> bool {
    let r = q.reversed();
    r == *q || r == q.neg()
}

/// Roots of an irreducible self-reciprocal `q` that lie on the unit circle.
fn on_circle(roots: &mut [AlgebraicNumber]) -> Vec<bool> {
    let mut out = vec![None; roots.len()];
    let mut prec = 32;
    while out.iter().any(|x| x.is_none()) {
        let balls: Vec<_> = roots
            .iter_mut()
            .map(|r| {
                *r = r.refined(&Rational::new(BigInt::one(), pow2(prec)));
                r.ball()
            })
            .collect();
        for i in 0..roots.len() {
            if out[i].is_some() {
                continue;
            }
            let z = roots[i].enclosure(prec);
            let inv = match z.conj().recip() {
                Some(v) => v,
                None => continue,
            };
            let ib = inv.to_ball();
            if ib.disjoint(&balls[i]) {
                out[i] = Some(false);
            } else if balls.iter().enumerate().all(|(j, b)| j == i || ib.disjoint(b)) {
                out[i] = Some(true);
            }
        }
        prec *= 2;
        assert!(prec < 1 << 16, "unit-circle test did not resolve");
    }
    out.into_iter().map(|x| x.unwrap()).collect()
}

/// A zero of the dominant function on the unit circle with its multiplicity.
#[derive(Clone, Debug)]
pub struct CircleZero {
    pub z: AlgebraicNumber,
    pub multiplicity: u32,
}

/// All zeros of `f` on the unit circle.
pub fn dominant_zeros(f: &DominantFunction) -> Result<Vec<AlgebraicNumber>> {
    Ok(dominant_zeros_with_multiplicity(f)?.into_iter().map(|c| c.z).collect())
}

pub fn dominant_zeros_with_multiplicity(f: &DominantFunction) -> Result<Vec<CircleZero>> {
    if f.is_zero() {
        return Err(Error::InvalidInput("dominant function is identically zero".into()));
    }
    let k = &f.field;
    let g = f.circle_polynomial();
    if g.len() <= 1 {
        return Ok(vec![]);
    }
    // squarefree chain: z has multiplicity > j iff it is a root of chain[j]
    let mut chain = vec![g.clone()];
    loop {
        let last = chain.last().unwrap();
        let d = k.poly_gcd(last, &k_derivative(k, last));
        if d.len() <= 1 {
            break;
        }
        chain.push(d);
    }
    let norm = IntPolynomial::from_q(&k.poly_norm(&g));
    let mut out = Vec::new();
    for (q, _) in factor(&norm) {
        if !self_reciprocal(&q) {
            continue;
        }
        let mut roots = poly_complex_roots(&q)?;
        let mut hit = roots_of_among(k, &g, &q, &mut roots);
        if !hit.iter().any(|&x| x) {
            continue;
        }
        let circle = on_circle(&mut roots);
        for (h, c) in hit.iter_mut().zip(&circle) {
            *h = *h && *c;
        }
        let mut mult = vec![1u32; roots.len()];
        for level in chain.iter().skip(1) {
            let deeper = roots_of_among(k, level, &q, &mut roots);
            for (m, d) in mult.iter_mut().zip(deeper) {
                if d {
                    *m += 1;
                }
            }
        }
        for ((r, h), m) in roots.into_iter().zip(hit).zip(mult) {
            if h {
                out.push(CircleZero { z: r, multiplicity: m });
            }
        }
    }
    assert!(out.len() <= 4 * f.k(), "dominant function has too many zeros");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::algebraic::{alg_abs, alg_equal};
    use crate::numeric::rational::rat;

    fn q() -> Arc<SplittingField> {
        Arc::new(SplittingField::rationals())
    }

    fn df(betas: &[Rational]) -> DominantFunction {
        let k = q();
        DominantFunction {
            betas: betas.iter().map(|b| k.rational(b.clone())).collect(),
            field: k,
        }
    }

    #[test]
    fn two_re_z() {
        let zs = dominant_zeros(&df(&[rat(0, 1), rat(1, 1)])).unwrap();
        assert_eq!(zs.len(), 2);
        for z in &zs {
            assert!(alg_equal(&alg_abs(z), &AlgebraicNumber::one()));
            assert_eq!(z.min_poly(), &IntPolynomial::from_i64(&[1, 0, 1]));
        }
    }

    #[test]
    fn constant_has_no_zeros() {
        assert!(dominant_zeros(&df(&[rat(1, 2)])).unwrap().is_empty());
        assert!(dominant_zeros(&df(&[rat(0, 1)])).is_err());
    }

    #[test]
    fn shifted_cosine() {
        let zs = dominant_zeros_with_multiplicity(&df(&[rat(-1, 2), rat(1, 1)])).unwrap();
        assert_eq!(zs.len(), 2);
        for z in &zs {
            assert_eq!(z.z.min_poly(), &IntPolynomial::from_i64(&[1, -1, 1]));
            assert_eq!(z.multiplicity, 1);
        }
    }

    #[test]
    fn double_zero() {
        // 2Re(z) + 2 = 2cos φ + 2 vanishes doubly at -1
        let zs = dominant_zeros_with_multiplicity(&df(&[rat(1, 1), rat(1, 1)])).unwrap();
        assert_eq!(zs.len(), 1);
        assert_eq!(zs[0].z.as_rational(), Some(rat(-1, 1)));
        assert_eq!(zs[0].multiplicity, 2);
    }

    #[test]
    fn off_circle_roots_are_dropped() {
        // 2Re(z) + 3 has no zeros on the circle
        assert!(dominant_zeros(&df(&[rat(3, 2), rat(1, 1)])).unwrap().is_empty());
    }

    #[test]
    fn derivative_of_cosine() {
        let f = df(&[rat(0, 1), rat(1, 1)]);
        let i = CInterval::point(rat(0, 1), rat(1, 1));
        let d = f.derivative_enclosure(&i, 1, 32);
        // d/dφ 2cos φ = -2 sin φ = -2 at φ = π/2
        assert!(d.contains(&rat(-2, 1)));
        assert!(f.eval_enclosure(&i, 32).contains(&rat(0, 1)));
    }
}
