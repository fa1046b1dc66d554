//! `p(M^n s)` as an exponential polynomial, its normalisation by the
//! dominant modulus, and the resulting arc sets on the unit circle.

mod dominant;
pub(crate) mod intervals;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ltl::AtomicPredicate;
use crate::numeric::algebraic::AlgebraicNumber;
use crate::numeric::field::{KElem, SplittingField};
use crate::numeric::interval::{CInterval, RInterval};
use crate::numeric::rational::{int, sqrt_interval, Rational};
use crate::spectral::{eval_kpoly, ClosedFormOrbit, Spectrum};
use crate::{Error, Result};

pub use dominant::{dominant_zeros, DominantFunction};
pub use intervals::{
    atomic_intervals, empirical_threshold, rational_circle_point, rigorous_threshold, AtomicIntervals,
    RigorousThreshold,
};

/// `Σ_e c_e(n) Π_b β_b^{n e_b}` with polynomial coefficients `c_e`.
#[derive(Clone, Debug)]
pub struct ExponentialSum {
    pub field: Arc<SplittingField>,
    pub bases: Vec<KElem>,
    /// Exponent vectors (one entry per base) to coefficient polynomials in
    /// `n`, lowest degree first. Distinct keys have distinct base products.
    pub terms: BTreeMap<Vec<u32>, Vec<KElem>>,
    pub valid_from: u64,
}

type Expansion = BTreeMap<Vec<u32>, Vec<KElem>>;

fn expansion_mul(k: &SplittingField, a: &Expansion, b: &Expansion) -> Expansion {
    let mut out: Expansion = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let prod = k.poly_mul(ca, cb);
            let slot = out.entry(e).or_default();
            *slot = poly_add(k, slot, &prod);
        }
    }
    out.retain(|_, c| !c.is_empty());
    out
}

fn poly_add(k: &SplittingField, a: &[KElem], b: &[KElem]) -> Vec<KElem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let out = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    k.poly_trim(out)
}

impl ExponentialSum {
    pub fn base_product(&self, e: &[u32]) -> KElem {
        let k = &self.field;
        e.iter()
            .zip(&self.bases)
            .fold(k.one(), |acc, (&p, b)| k.mul(&acc, &k.pow(b, p as u64)))
    }

    /// Exact value at `n` (valid for `n >= valid_from`).
    pub fn eval(&self, n: u64) -> KElem {
        let k = &self.field;
        let nq = int(n as i64);
        self.terms.iter().fold(k.zero(), |acc, (e, c)| {
            let v = k.pow(&self.base_product(e), n);
            k.add(&acc, &k.mul(&eval_kpoly(k, c, &nq), &v))
        })
    }

    /// Exponent vectors padded to three entries, with coefficients.
    pub fn triples(&self) -> Vec<([u32; 3], Vec<KElem>)> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = [0; 3];
                for (i, x) in e.iter().enumerate().take(3) {
                    t[i] = *x;
                }
                (t, c.clone())
            })
            .collect()
    }
}

/// Expands `p(x(n))` monomial by monomial and collects terms with equal
/// base products.
pub fn aggregate(pred: &AtomicPredicate, orbit: &ClosedFormOrbit) -> ExponentialSum {
    let k = &orbit.field;
    let nb = orbit.bases.len();
    let coords: Vec<Expansion> = (0..3)
        .map(|i| {
            let mut e = Expansion::new();
            for b in 0..nb {
                let c = &orbit.coeffs[i][b];
                if !c.is_empty() {
                    let mut key = vec![0; nb];
                    key[b] = 1;
                    e.insert(key, c.clone());
                }
            }
            e
        })
        .collect();
    let mut unit = Expansion::new();
    unit.insert(vec![0; nb], vec![k.one()]);
    let mut powers: HashMap<(usize, u32), Expansion> = HashMap::new();
    let mut total = Expansion::new();
    for (exps, c) in pred.poly.terms() {
        let mut acc = unit.clone();
        for i in 0..3 {
            if exps[i] == 0 {
                continue;
            }
            let pw = powers
                .entry((i, exps[i]))
                .or_insert_with(|| (0..exps[i]).fold(unit.clone(), |a, _| expansion_mul(k, &a, &coords[i])))
                .clone();
            acc = expansion_mul(k, &acc, &pw);
        }
        let cq = Rational::from_integer(c.clone());
        for (e, p) in acc {
            let scaled: Vec<KElem> = p.iter().map(|x| k.scale(x, &cq)).collect();
            let slot = total.entry(e).or_default();
            *slot = poly_add(k, slot, &scaled);
        }
    }
    total.retain(|_, c| !c.is_empty());
    let mut es = ExponentialSum {
        field: k.clone(),
        bases: orbit.bases.clone(),
        terms: BTreeMap::new(),
        valid_from: orbit.valid_from,
    };
    let mut by_value: HashMap<KElem, Vec<u32>> = HashMap::new();
    for (e, c) in total {
        let v = es.base_product(&e);
        match by_value.get(&v) {
            Some(key) => {
                let slot = es.terms.get_mut(key).unwrap();
                *slot = poly_add(k, slot, &c);
            }
            None => {
                by_value.insert(v, e.clone());
                es.terms.insert(e, c);
            }
        }
    }
    es.terms.retain(|_, c| !c.is_empty());
    es
}

/// True iff the expression vanishes identically.
pub fn all_zero(es: &ExponentialSum) -> bool {
    es.terms.values().all(|c| c.is_empty())
}

/// A non-dominant term `χ μ^n` of the normalised expression.
#[derive(Clone, Debug)]
pub struct Residual {
    pub exponents: Vec<u32>,
    pub coeff: KElem,
    /// `χ μ^n Λ^n` equals `coeff · value^n`.
    pub value: KElem,
    /// `|μ|²`, exactly below one.
    pub ratio_sq: KElem,
}

/// `e(n) = p(M^n s)/Λ^n = Σ_m (β_m γ^{nm} + conj) + Σ_l χ_l μ_l^n`.
#[derive(Clone, Debug)]
pub struct NormalizedExpression {
    pub field: Arc<SplittingField>,
    /// `β_0, …, β_k`; `β_k ≠ 0`.
    pub betas: Vec<KElem>,
    pub gamma: AlgebraicNumber,
    /// `Λ²`.
    pub modulus_sq: KElem,
    pub residual: Vec<Residual>,
    pub valid_from: u64,
}

impl NormalizedExpression {
    pub fn k(&self) -> usize {
        self.betas.len() - 1
    }

    pub fn dominant(&self) -> DominantFunction {
        DominantFunction {
            field: self.field.clone(),
            betas: self.betas.clone(),
        }
    }

    /// Enclosure of `e(n)`.
    pub fn eval_enclosure(&self, n: u64, prec: u32) -> RInterval {
        let k = &self.field;
        let g = self.gamma.enclosure(prec + 2 * (64 - n.leading_zeros()) + 8);
        let z = cpow(&g, n);
        let f = self.dominant().eval_enclosure(&z, prec + 8);
        let lam = sqrt_interval(&k.enclosure(&self.modulus_sq, prec + 8).re, prec + 8);
        let mut r = CInterval::point(Rational::zero(), Rational::zero());
        for t in &self.residual {
            let c = k.enclosure(&t.coeff, prec + 8);
            let v = k.enclosure(&t.value, prec + 8);
            let inv = lam.recip().expect("Λ > 0");
            let mu = CInterval::new(&v.re * &inv, &v.im * &inv);
            r = &r + &(&c * &cpow(&mu, n));
        }
        &f + &r.re
    }
}

pub(crate) fn cpow(z: &CInterval, mut n: u64) -> CInterval {
    let mut acc = CInterval::point(Rational::one(), Rational::zero());
    let mut b = z.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &b;
        }
        b = &b * &b;
        n >>= 1;
    }
    acc
}

/// Divides by the dominant modulus `Λ`. Requires the complex-pair regime.
pub fn normalize(es: &ExponentialSum, spec: &Spectrum) -> Result<NormalizedExpression> {
    if !spec.complex {
        return Err(Error::WrongRegime("normalisation needs a complex eigenvalue pair".into()));
    }
    if all_zero(es) {
        return Err(Error::InvalidInput("expression is identically zero".into()));
    }
    let k = &es.field;
    let lam = spec.lambda().unwrap();
    let lam_sq = k.norm_sqr(lam);
    let rho = (es.bases.len() > 2).then(|| es.bases[2].clone());
    let modulus = |e: &[u32]| -> KElem {
        let mut m = k.pow(&lam_sq, (e[0] + e[1]) as u64);
        if let Some(r) = &rho {
            m = k.mul(&m, &k.pow(&k.mul(r, r), e[2] as u64));
        }
        m
    };
    let mut best: Option<KElem> = None;
    for e in es.terms.keys() {
        let m = modulus(e);
        if best.as_ref().is_none_or(|b| k.cmp_real(&m, b).is_gt()) {
            best = Some(m);
        }
    }
    let big = best.unwrap();
    let mut betas: BTreeMap<u32, KElem> = BTreeMap::new();
    let mut residual = Vec::new();
    for (e, c) in &es.terms {
        if c.len() > 1 {
            return Err(Error::InvalidInput("polynomial coefficients in the complex regime".into()));
        }
        let c = c[0].clone();
        let m = modulus(e);
        if k.cmp_real(&m, &big).is_eq() {
            if e.len() > 2 && e[2] % 2 == 1 && rho.as_ref().is_some_and(|r| k.sign(r) < 0) {
                return Err(Error::Unsupported(
                    "negative real eigenvalue in a dominant term with odd exponent".into(),
                ));
            }
            if e[0] >= e[1] {
                let idx = e[0] - e[1];
                let c = if idx == 0 { k.scale(&c, &Rational::new(BigInt::one(), BigInt::from(2))) } else { c };
                let slot = betas.entry(idx).or_insert_with(|| k.zero());
                *slot = k.add(slot, &c);
            }
        } else {
            residual.push(Residual {
                exponents: e.clone(),
                value: es.base_product(e),
                ratio_sq: k.div(&m, &big)?,
                coeff: c,
            });
        }
    }
    let kmax = *betas.keys().max().unwrap() as usize;
    let mut bv = vec![k.zero(); kmax + 1];
    for (i, b) in betas {
        bv[i as usize] = b;
    }
    debug_assert!(residual.iter().all(|r| k.cmp_real(&r.ratio_sq, &k.one()).is_lt()));
    Ok(NormalizedExpression {
        field: k.clone(),
        betas: bv,
        gamma: spec.gamma().unwrap(),
        modulus_sq: big,
        residual,
        valid_from: es.valid_from,
    })
}
