use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::dominant::{dominant_zeros_with_multiplicity, DominantFunction};
use super::NormalizedExpression;
use crate::numeric::field::{KElem, SplittingField};
use crate::numeric::interval::{CInterval, RInterval};
use crate::numeric::rational::{atan_interval, ln_interval, pi_interval, sqrt_upper_rel, Rational};
use crate::oracle::OrbitOracle;
use crate::torus::{Arc, Torus, TorusPoint, TorusSet};
use crate::{Error, Result};

const MAX_PREC: u32 = 1 << 14;

fn two() -> Rational {
    Rational::from_integer(BigInt::from(2))
}

fn circle_point(t: &Rational) -> (Rational, Rational) {
    let d = Rational::one() + t * t;
    ((Rational::one() - t * t) / &d, (t * two()) / &d)
}

/// A rational point of the unit circle strictly inside the open arc from
/// `p` to `q`.
pub fn rational_circle_point(torus: &Torus, p: TorusPoint, q: TorusPoint) -> Result<(Rational, Rational)> {
    let same = torus.cmp_points(p, q);
    let mut prec = 64;
    while prec <= MAX_PREC {
        let tp = pi_interval(prec + 2).scale(&two());
        let a = torus.angle_enclosure(p, prec);
        let b = torus.angle_enclosure(q, prec);
        let lo = a.hi.clone();
        let hi = match same {
            Ordering::Equal => &a.lo + &tp.lo,
            Ordering::Less => b.lo.clone(),
            Ordering::Greater => &b.lo + &tp.lo,
        };
        if hi > lo {
            let w = &hi - &lo;
            for j in [4, 3, 5, 2, 6, 1, 7] {
                let phi = &lo + &w * Rational::new(BigInt::from(j), BigInt::from(8));
                let t = (phi.to_f64().unwrap_or(0.0) / 2.0).tan();
                if !t.is_finite() || t.abs() > 1e15 {
                    continue;
                }
                let t = match BigRational::from_float(t) {
                    Some(t) => t,
                    None => continue,
                };
                let ang = atan_interval(&t, prec).scale(&two());
                let inside = (0..3).any(|k| {
                    let kq = Rational::from_integer(BigInt::from(k));
                    &ang.lo + &tp.lo * &kq > lo && &ang.hi + &tp.hi * &kq < hi
                });
                if inside {
                    return Ok(circle_point(&t));
                }
            }
        }
        prec *= 2;
    }
    Err(Error::Unsupported("arc too short to place a rational sample point".into()))
}

fn sign_at(f: &DominantFunction, x: &Rational, y: &Rational) -> i32 {
    let z = CInterval::point(x.clone(), y.clone());
    let mut prec = 32;
    loop {
        if let Some(s) = f.eval_enclosure(&z, prec).sign() {
            return s;
        }
        prec *= 2;
        assert!(prec <= MAX_PREC, "dominant function vanishes at a sample point");
    }
}

/// The arc set `J` and the zeros delimiting it.
#[derive(Clone, Debug)]
pub struct AtomicIntervals {
    pub set: TorusSet,
    /// Zeros of the dominant function, counterclockwise from `1`, with
    /// multiplicities.
    pub zeros: Vec<(TorusPoint, u32)>,
}

/// Union of the open arcs between consecutive zeros of `f` on which `f > 0`.
/// Strict and non-strict atoms share this set.
pub fn atomic_intervals(torus: &Torus, ne: &NormalizedExpression) -> Result<AtomicIntervals> {
    let f = ne.dominant();
    let zs = dominant_zeros_with_multiplicity(&f)?;
    let mut zeros: Vec<(TorusPoint, u32)> = zs
        .into_iter()
        .map(|c| (torus.register(c.z), c.multiplicity))
        .collect();
    zeros.sort_by(|a, b| torus.cmp_points(a.0, b.0));
    if zeros.is_empty() {
        let s = sign_at(&f, &Rational::one(), &Rational::zero());
        let set = if s > 0 { TorusSet::Full } else { TorusSet::empty() };
        return Ok(AtomicIntervals { set, zeros });
    }
    let mut arcs = Vec::new();
    for i in 0..zeros.len() {
        let p = zeros[i].0;
        let q = zeros[(i + 1) % zeros.len()].0;
        let (x, y) = rational_circle_point(torus, p, q)?;
        if sign_at(&f, &x, &y) > 0 {
            arcs.push(Arc { start: p, end: q });
        }
    }
    Ok(AtomicIntervals {
        set: torus.canonicalize(&TorusSet::Arcs(arcs)),
        zeros,
    })
}

/// Smallest `n0 <= horizon` such that `γ^n ∈ J` agrees with the exact
/// predicate on `[n0, horizon]`; `None` if they disagree at the horizon.
pub fn empirical_threshold(
    torus: &Torus,
    set: &TorusSet,
    oracle: &OrbitOracle,
    atom: usize,
    horizon: u64,
) -> Option<u64> {
    for n in (0..=horizon).rev() {
        if torus.contains_gamma_power(set, n) != oracle.holds(atom, n) {
            return (n < horizon).then_some(n + 1);
        }
    }
    Some(0)
}

/// Dominance threshold derived from the residual decay and a
/// linear-forms-in-logarithms gap with constant `C`. This is a
/// reconstruction: beyond `n`, `|r(n)| < |f(γ^n)|`.
#[derive(Clone, Debug)]
pub struct RigorousThreshold {
    pub n: BigInt,
    /// `Σ |χ_l|`.
    pub residual_scale: Rational,
    /// Upper bound on `max |μ_l|`.
    pub decay: Rational,
    /// Lower bound on `|f|` away from its zeros.
    pub floor: Option<Rational>,
    /// Baker exponent `(‖γ‖ + ‖z‖)^C`.
    pub gap_exponent: BigInt,
}

pub(crate) fn ln_hi(x: &Rational) -> Rational {
    ln_interval(x, 64).hi
}

pub(crate) fn ln_lo(x: &Rational) -> Rational {
    ln_interval(x, 64).lo
}

fn factorial(m: u32) -> Rational {
    Rational::from_integer((1..=m as u64).fold(BigInt::one(), |a, b| a * b))
}

/// Lower bound on `|f(e^{iφ})|` over angles at distance at least `delta`
/// from every listed zero angle.
fn circle_floor(f: &DominantFunction, zero_angles: &[RInterval], delta: &Rational) -> Result<Rational> {
    let pi = pi_interval(80);
    let tp = pi.scale(&two());
    let near_zero = |u: &Rational, v: &Rational| {
        zero_angles.iter().any(|a| {
            (-1..=1).any(|k: i32| {
                let kq = Rational::from_integer(BigInt::from(k));
                let lo = &a.hi + &tp.hi * &kq - delta;
                let hi = &a.lo + &tp.lo * &kq + delta;
                u >= &lo && v <= &hi
            })
        })
    };
    let mut best: Option<Rational> = None;
    for chart in 0..2 {
        let mut stack = vec![(Rational::from_integer((-1).into()), Rational::one(), 0u32)];
        while let Some((t0, t1, depth)) = stack.pop() {
            let t = RInterval::new(t0.clone(), t1.clone());
            let den = (&RInterval::point(Rational::one()) + &t.square()).recip().unwrap();
            let re = &(&RInterval::point(Rational::one()) - &t.square()) * &den;
            let im = &t.scale(&two()) * &den;
            let z = if chart == 0 { CInterval::new(re, im) } else { CInterval::new(-&re, -&im) };
            let v = f.eval_enclosure(&z, 64);
            if let Some(s) = v.sign() {
                let low = if s > 0 { v.lo } else { -v.hi };
                best = Some(best.map_or(low.clone(), |b| b.min(low)));
                continue;
            }
            // chart 1 is the half circle rotated by π
            let (sl, sh) = if chart == 0 { (Rational::zero(), Rational::zero()) } else { (pi.lo.clone(), pi.hi.clone()) };
            let u = &atan_interval(&t0, 64).lo * two() + sl;
            let w = &atan_interval(&t1, 64).hi * two() + sh;
            if near_zero(&u, &w) {
                continue;
            }
            if depth > 48 {
                return Err(Error::Unsupported("could not bound the dominant function away from zero".into()));
            }
            let mid = (&t0 + &t1) / two();
            stack.push((t0, mid.clone(), depth + 1));
            stack.push((mid, t1, depth + 1));
        }
    }
    best.ok_or_else(|| Error::Unsupported("dominant function floor is undefined".into()))
}

/// Upper bound below one on `sqrt(r)` for a real field element `0 <= r < 1`.
pub(crate) fn contraction_upper(k: &SplittingField, r: &KElem) -> Rational {
    let mut prec = 32;
    loop {
        let mu = sqrt_upper_rel(&k.enclosure(r, prec).re.hi);
        if mu < Rational::one() {
            return mu;
        }
        prec *= 2;
        assert!(prec <= MAX_PREC, "ratio is not below one");
    }
}

/// Smallest `n >= start` with `n·L − a·ln n > b`, assuming the left side
/// increases from `start` on.
pub(crate) fn solve_log_linear(l: &Rational, a: &Rational, b: &Rational, start: BigInt) -> BigInt {
    let ok = |n: &BigInt| -> bool {
        let nq = Rational::from_integer(n.clone());
        &nq * l - a * ln_hi(&nq) > *b
    };
    if ok(&start) {
        return start;
    }
    let mut lo = start.clone();
    let mut hi = &start * 2 + 1;
    while !ok(&hi) {
        lo = hi.clone();
        hi = &hi * 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn rigorous_threshold(
    torus: &Torus,
    ne: &NormalizedExpression,
    zeros: &[(TorusPoint, u32)],
    baker_c: u32,
) -> Result<RigorousThreshold> {
    let k = &ne.field;
    let f = ne.dominant();
    let start = BigInt::from(ne.valid_from);
    if ne.residual.is_empty() {
        return Ok(RigorousThreshold {
            n: start,
            residual_scale: Rational::zero(),
            decay: Rational::zero(),
            floor: None,
            gap_exponent: BigInt::zero(),
        });
    }
    let scale: Rational = ne.residual.iter().map(|r| k.abs_upper(&r.coeff)).sum();
    let mut decay = Rational::zero();
    for r in &ne.residual {
        decay = decay.max(contraction_upper(k, &r.ratio_sq));
    }
    let l = -ln_hi(&decay);
    // Taylor regime around each zero
    let mut delta: Option<Rational> = None;
    let mut c_min: Option<Rational> = None;
    let mut m_max = 0u32;
    let mut angles = Vec::new();
    let mut size_z = 0u64;
    for &(p, m) in zeros {
        let z = torus.value(p);
        size_z = size_z.max(z.size_bits());
        angles.push(torus.angle_enclosure(p, 64));
        let mut prec = 32;
        let c = loop {
            let d = f.derivative_enclosure(&z.enclosure(prec), m, prec);
            if let Some(s) = d.sign() {
                let low = if s > 0 { d.lo } else { -d.hi };
                break low / factorial(m);
            }
            prec *= 2;
            assert!(prec <= MAX_PREC, "derivative at a zero of exact multiplicity vanished");
        };
        let bound = f.derivative_bound(m + 1) / factorial(m + 1);
        let dj = std::cmp::min(&c / (&bound * two()), Rational::one());
        delta = Some(delta.map_or(dj.clone(), |d| d.min(dj)));
        let half = &c / two();
        c_min = Some(c_min.map_or(half.clone(), |x| x.min(half)));
        m_max = m_max.max(m);
    }
    let delta = delta.unwrap_or_else(Rational::zero);
    let floor = circle_floor(&f, &angles, &delta)?;
    let ln_scale = ln_hi(&scale);
    // R μ^n < floor
    let n1 = ((&ln_scale - ln_lo(&floor)) / &l).floor().to_integer() + 1;
    let mut n = std::cmp::max(start, n1);
    let mut gap_exponent = BigInt::zero();
    if let Some(c_min) = c_min {
        gap_exponent = num_traits::pow(BigInt::from(torus.gamma().size_bits() + size_z), baker_c as usize);
        let a = Rational::from_integer(&gap_exponent * BigInt::from(m_max));
        let b = &ln_scale - ln_lo(&c_min);
        let turn = (&a / &l).ceil().to_integer().max(BigInt::from(2));
        n = n.max(solve_log_linear(&l, &a, &b, turn));
    }
    Ok(RigorousThreshold {
        n,
        residual_scale: scale,
        decay,
        floor: Some(floor),
        gap_exponent,
    })
}
