//! Exact rationals plus rigorous rational enclosures of a few transcendental
//! quantities (square roots, pi, arctangent, logarithm).

use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::RInterval;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

/// Number of bits of `|n|` (0 for zero).
pub fn bit_length(n: &BigInt) -> u64 {
    n.bits()
}

/// Bits needed to write a rational as numerator/denominator with signs.
pub fn rational_bits(x: &Rational) -> u64 {
    bit_length(x.numer()) + bit_length(x.denom()) + 1
}

pub fn floor_dyadic(x: &Rational, prec: u32) -> Rational {
    if x.denom().is_one() {
        return x.clone();
    }
    let scaled = x * Rational::from_integer(pow2(prec));
    Rational::new(scaled.floor().to_integer(), pow2(prec))
}

pub fn ceil_dyadic(x: &Rational, prec: u32) -> Rational {
    if x.denom().is_one() {
        return x.clone();
    }
    let scaled = x * Rational::from_integer(pow2(prec));
    Rational::new(scaled.ceil().to_integer(), pow2(prec))
}

/// Lower bound on `sqrt(x)` within `2^-prec`; `x >= 0`.
pub fn sqrt_lower(x: &Rational, prec: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of negative");
    let scaled = (x * Rational::from_integer(pow2(2 * prec))).floor().to_integer();
    Rational::new(scaled.sqrt(), pow2(prec))
}

/// Upper bound on `sqrt(x)` within `2^-prec`; `x >= 0`.
pub fn sqrt_upper(x: &Rational, prec: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of negative");
    let scaled = (x * Rational::from_integer(pow2(2 * prec))).ceil().to_integer();
    let s = scaled.sqrt();
    let s = if &s * &s == scaled { s } else { s + 1 };
    Rational::new(s, pow2(prec))
}

/// Upper bound on `sqrt(x)` accurate to about 64 bits relative to the value.
pub fn sqrt_upper_rel(x: &Rational) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let scale = x.denom().bits().saturating_sub(x.numer().bits()) as u32;
    sqrt_upper(x, scale / 2 + 64)
}

/// Lower counterpart of [`sqrt_upper_rel`].
pub fn sqrt_lower_rel(x: &Rational) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let scale = x.denom().bits().saturating_sub(x.numer().bits()) as u32;
    sqrt_lower(x, scale / 2 + 64)
}

pub fn sqrt_interval(x: &RInterval, prec: u32) -> RInterval {
    let lo = if x.lo.is_negative() {
        Rational::zero()
    } else {
        sqrt_lower(&x.lo, prec)
    };
    RInterval::new(lo, sqrt_upper(&x.hi, prec))
}

/// Bounds on `atan(x)` for `0 <= x <= 1/2` by the alternating Taylor series.
fn atan_series(x: &Rational, prec: u32) -> (Rational, Rational) {
    debug_assert!(!x.is_negative());
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let eps = Rational::new(BigInt::one(), pow2(prec + 4));
    let x2 = x * x;
    let mut power = x.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = &power / int(2 * k + 1);
        let next = &sum + if k % 2 == 0 { term.clone() } else { -term.clone() };
        // consecutive partial sums bracket the limit
        if term < eps {
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return (floor_dyadic(&lo, prec + 8), ceil_dyadic(&hi, prec + 8));
        }
        sum = next;
        power = &power * &x2;
        k += 1;
    }
}

/// Rigorous enclosure of `atan(x)` for rational `x`.
pub fn atan_interval(x: &Rational, prec: u32) -> RInterval {
    if x.is_negative() {
        return -&atan_interval(&-x.clone(), prec);
    }
    if x > &Rational::one() {
        // atan(x) = pi/2 - atan(1/x)
        let inner = atan_interval(&x.recip(), prec);
        let half_pi = pi_interval(prec).scale(&rat(1, 2));
        return &half_pi - &inner;
    }
    // two halvings: atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
    let mut lo_arg = x.clone();
    let mut hi_arg = x.clone();
    for _ in 0..2 {
        let one = Rational::one();
        let lo_den = &one + sqrt_upper(&(&one + &lo_arg * &lo_arg), prec + 8);
        let hi_den = &one + sqrt_lower(&(&one + &hi_arg * &hi_arg), prec + 8);
        lo_arg = floor_dyadic(&(&lo_arg / lo_den), prec + 8);
        hi_arg = ceil_dyadic(&(&hi_arg / hi_den), prec + 8);
    }
    let (lo, _) = atan_series(&lo_arg, prec + 4);
    let (_, hi) = atan_series(&hi_arg, prec + 4);
    RInterval::new(lo * int(4), hi * int(4))
}

static PI_CACHE: Mutex<Option<(u32, RInterval)>> = Mutex::new(None);

/// Enclosure of pi with width below `2^-prec` (Machin's formula).
pub fn pi_interval(prec: u32) -> RInterval {
    if let Some((p, iv)) = PI_CACHE.lock().unwrap().as_ref() {
        if *p >= prec {
            return iv.clone();
        }
    }
    let p = prec + 8;
    let (a_lo, a_hi) = atan_series(&rat(1, 5), p);
    let (b_lo, b_hi) = atan_series(&rat(1, 239), p);
    let lo = a_lo * int(16) - b_hi * int(4);
    let hi = a_hi * int(16) - b_lo * int(4);
    let iv = RInterval::new(floor_dyadic(&lo, p), ceil_dyadic(&hi, p));
    *PI_CACHE.lock().unwrap() = Some((prec, iv.clone()));
    iv
}

pub fn two_pi_interval(prec: u32) -> RInterval {
    pi_interval(prec + 1).scale(&int(2))
}

/// Bounds on `2 atanh(u) = ln((1+u)/(1-u))` for `0 <= u <= 1/3`.
fn atanh2_series(u: &Rational, prec: u32) -> (Rational, Rational) {
    let eps = Rational::new(BigInt::one(), pow2(prec + 4));
    let u2 = u * u;
    let mut power = u.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = &power / int(2 * k + 1);
        sum += &term;
        // tail bounded by next term / (1 - u^2)
        let next_term = &power * &u2 / int(2 * k + 3);
        let tail = &next_term / (Rational::one() - &u2);
        if tail < eps {
            let two = int(2);
            return (
                floor_dyadic(&(&sum * &two), prec + 4),
                ceil_dyadic(&((&sum + &tail) * &two), prec + 4),
            );
        }
        power = &power * &u2;
        k += 1;
    }
}

pub fn ln2_interval(prec: u32) -> RInterval {
    let (lo, hi) = atanh2_series(&rat(1, 3), prec);
    RInterval::new(lo, hi)
}

/// Enclosure of `ln(x)` for rational `x > 0`.
pub fn ln_interval(x: &Rational, prec: u32) -> RInterval {
    assert!(x.is_positive(), "ln of non-positive value");
    // x = 2^k * y with y in [1, 2)
    let k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut y = x.clone();
    let mut k = k;
    if k >= 0 {
        y /= Rational::from_integer(pow2(k as u32));
    } else {
        y *= Rational::from_integer(pow2((-k) as u32));
    }
    while y >= int(2) {
        y /= int(2);
        k += 1;
    }
    while y < Rational::one() {
        y *= int(2);
        k -= 1;
    }
    let u = (&y - Rational::one()) / (&y + Rational::one());
    let (lo, hi) = atanh2_series(&u, prec + 8);
    let ln2 = ln2_interval(prec + 8 + 64);
    let base = ln2.scale(&int(k));
    let r = &base + &RInterval::new(lo, hi);
    r.round(prec + 4)
}

/// Enclosure of the argument of a complex box that excludes the origin.
///
/// The result lies within `(-pi, 2pi)`; callers reduce modulo `2pi`.
pub fn arg_interval(re: &RInterval, im: &RInterval, prec: u32) -> Option<RInterval> {
    let ratio_range = |num: &RInterval, den: &RInterval| -> RInterval {
        // den excludes zero
        let c = [
            &num.lo / &den.lo,
            &num.lo / &den.hi,
            &num.hi / &den.lo,
            &num.hi / &den.hi,
        ];
        RInterval::new(c.iter().min().unwrap().clone(), c.iter().max().unwrap().clone())
    };
    let pi = pi_interval(prec + 4);
    if re.lo.is_positive() {
        let r = ratio_range(im, re);
        return Some(RInterval::new(
            atan_interval(&r.lo, prec).lo,
            atan_interval(&r.hi, prec).hi,
        ));
    }
    if im.lo.is_positive() {
        // pi/2 - atan(re/im)
        let r = ratio_range(re, im);
        let half = pi.scale(&rat(1, 2));
        return Some(RInterval::new(
            &half.lo - atan_interval(&r.hi, prec).hi,
            &half.hi - atan_interval(&r.lo, prec).lo,
        ));
    }
    if re.hi.is_negative() {
        // pi + atan(im/re)
        let r = ratio_range(im, re);
        return Some(RInterval::new(
            &pi.lo + atan_interval(&r.lo, prec).lo,
            &pi.hi + atan_interval(&r.hi, prec).hi,
        ));
    }
    if im.hi.is_negative() {
        // 3pi/2 - atan(re/im)
        let r = ratio_range(re, im);
        let three_half = pi.scale(&rat(3, 2));
        return Some(RInterval::new(
            &three_half.lo - atan_interval(&r.hi, prec).hi,
            &three_half.hi - atan_interval(&r.lo, prec).lo,
        ));
    }
    None
}

pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: &Rational) -> f64 {
        super::super::interval::to_f64(x)
    }

    #[test]
    fn pi_is_enclosed() {
        let p = pi_interval(100);
        assert!(f(&p.lo) <= std::f64::consts::PI && std::f64::consts::PI <= f(&p.hi));
        assert!(p.width() < Rational::new(BigInt::one(), pow2(95)));
    }

    #[test]
    fn atan_matches_f64() {
        for (n, d) in [(1, 1), (1, 3), (7, 2), (-5, 4), (0, 1), (100, 1)] {
            let x = rat(n, d);
            let iv = atan_interval(&x, 80);
            let want = (n as f64 / d as f64).atan();
            assert!(f(&iv.lo) <= want + 1e-15 && want - 1e-15 <= f(&iv.hi), "{n}/{d}");
            assert!(iv.width() < Rational::new(BigInt::one(), pow2(70)));
        }
    }

    #[test]
    fn ln_matches_f64() {
        for (n, d) in [(1, 1), (2, 1), (3, 7), (1000, 3), (1, 1024)] {
            let iv = ln_interval(&rat(n, d), 80);
            let want = (n as f64 / d as f64).ln();
            assert!(f(&iv.lo) <= want + 1e-12 && want - 1e-12 <= f(&iv.hi), "{n}/{d}");
        }
    }

    #[test]
    fn arg_quadrants() {
        let pt = |a: i64, b: i64| (RInterval::point(int(a)), RInterval::point(int(b)));
        for (a, b) in [(1, 1), (-1, 1), (-1, -1), (1, -1), (0, 1), (-1, 0), (0, -1)] {
            let (re, im) = pt(a, b);
            let iv = arg_interval(&re, &im, 60).unwrap();
            let mut want = (b as f64).atan2(a as f64);
            if want < -1e-9 {
                want += 2.0 * std::f64::consts::PI;
            }
            let mid = f(&iv.mid());
            let m = mid.rem_euclid(2.0 * std::f64::consts::PI);
            assert!((m - want).abs() < 1e-12, "({a},{b}) {m} vs {want}");
        }
        assert!(arg_interval(&RInterval::new(int(-1), int(1)), &RInterval::zero(), 10).is_none());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = int(2);
        let lo = sqrt_lower(&two, 40);
        let hi = sqrt_upper(&two, 40);
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert_eq!(sqrt_upper(&int(9), 10), int(3));
    }
}
