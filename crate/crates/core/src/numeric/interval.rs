//! Outward-rounded rational interval and complex ball arithmetic.
//!
//! Every operation returns an enclosure of the exact result. Endpoints are
//! rounded to dyadic rationals so that sizes stay bounded under iteration.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::{ceil_dyadic, floor_dyadic, sqrt_upper, Rational};

/// Closed real interval `[lo, hi]` with rational endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct RInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl fmt::Debug for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

pub(crate) fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl RInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign if the interval excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &RInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn abs_upper(&self) -> Rational {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    pub fn abs(&self) -> RInterval {
        if self.lo.is_negative() && self.hi.is_positive() {
            RInterval::new(Rational::zero(), self.abs_upper())
        } else if self.hi.is_negative() || self.hi.is_zero() {
            RInterval::new(-self.hi.clone(), -self.lo.clone())
        } else {
            self.clone()
        }
    }

    /// Round endpoints outward to multiples of `2^-prec`.
    pub fn round(&self, prec: u32) -> RInterval {
        RInterval {
            lo: floor_dyadic(&self.lo, prec),
            hi: ceil_dyadic(&self.hi, prec),
        }
    }

    pub fn square(&self) -> RInterval {
        let a = self.abs();
        RInterval::new(&a.lo * &a.lo, &a.hi * &a.hi)
    }

    pub fn recip(&self) -> Option<RInterval> {
        if self.contains_zero() {
            return None;
        }
        Some(RInterval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn pow(&self, e: u32) -> RInterval {
        let mut acc = RInterval::point(Rational::from_integer(BigInt::from(1)));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> RInterval {
        if c.is_negative() {
            RInterval::new(&self.hi * c, &self.lo * c)
        } else {
            RInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn hull(&self, other: &RInterval) -> RInterval {
        RInterval::new(
            std::cmp::min(&self.lo, &other.lo).clone(),
            std::cmp::max(&self.hi, &other.hi).clone(),
        )
    }
}

impl Add for &RInterval {
    type Output = RInterval;
    fn add(self, rhs: &RInterval) -> RInterval {
        RInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &RInterval {
    type Output = RInterval;
    fn sub(self, rhs: &RInterval) -> RInterval {
        RInterval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &RInterval {
    type Output = RInterval;
    fn neg(self) -> RInterval {
        RInterval::new(-self.hi.clone(), -self.lo.clone())
    }
}

impl Mul for &RInterval {
    type Output = RInterval;
    fn mul(self, rhs: &RInterval) -> RInterval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RInterval::new(lo, hi)
    }
}

/// Rectangular complex enclosure `re + i·im`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CInterval {
    pub re: RInterval,
    pub im: RInterval,
}

impl CInterval {
    pub fn new(re: RInterval, im: RInterval) -> Self {
        CInterval { re, im }
    }

    pub fn real(re: RInterval) -> Self {
        CInterval {
            re,
            im: RInterval::zero(),
        }
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        CInterval {
            re: RInterval::point(re),
            im: RInterval::point(im),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn conj(&self) -> CInterval {
        CInterval::new(self.re.clone(), -&self.im)
    }

    pub fn round(&self, prec: u32) -> CInterval {
        CInterval::new(self.re.round(prec), self.im.round(prec))
    }

    pub fn norm_sqr(&self) -> RInterval {
        &self.re.square() + &self.im.square()
    }

    pub fn recip(&self) -> Option<CInterval> {
        let n = self.norm_sqr();
        let inv = n.recip()?;
        Some(CInterval::new(&self.re * &inv, &(-&self.im) * &inv))
    }

    pub fn scale(&self, c: &Rational) -> CInterval {
        CInterval::new(self.re.scale(c), self.im.scale(c))
    }

    pub fn max_width(&self) -> Rational {
        std::cmp::max(self.re.width(), self.im.width())
    }

    /// Smallest ball (rational center, rational radius) containing the box.
    pub fn to_ball(&self) -> ComplexBall {
        let half_w = self.re.width() / Rational::from_integer(BigInt::from(2));
        let half_h = self.im.width() / Rational::from_integer(BigInt::from(2));
        let r2 = &half_w * &half_w + &half_h * &half_h;
        ComplexBall {
            center: (self.re.mid(), self.im.mid()),
            radius: sqrt_upper(&r2, 64),
        }
    }

    pub fn overlaps(&self, other: &CInterval) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }
}

impl Add for &CInterval {
    type Output = CInterval;
    fn add(self, rhs: &CInterval) -> CInterval {
        CInterval::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &CInterval {
    type Output = CInterval;
    fn sub(self, rhs: &CInterval) -> CInterval {
        CInterval::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Neg for &CInterval {
    type Output = CInterval;
    fn neg(self) -> CInterval {
        CInterval::new(-&self.re, -&self.im)
    }
}

impl Mul for &CInterval {
    type Output = CInterval;
    fn mul(self, rhs: &CInterval) -> CInterval {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        CInterval::new(re, im)
    }
}

/// Disk with rational center and radius; the refinement vehicle for
/// algebraic numbers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexBall {
    pub center: (Rational, Rational),
    pub radius: Rational,
}

impl ComplexBall {
    pub fn exact(re: Rational, im: Rational) -> Self {
        ComplexBall {
            center: (re, im),
            radius: Rational::zero(),
        }
    }

    pub fn to_box(&self) -> CInterval {
        let (re, im) = &self.center;
        CInterval::new(
            RInterval::new(re - &self.radius, re + &self.radius),
            RInterval::new(im - &self.radius, im + &self.radius),
        )
    }

    pub fn contains_point(&self, re: &Rational, im: &Rational) -> bool {
        let dr = re - &self.center.0;
        let di = im - &self.center.1;
        &dr * &dr + &di * &di <= &self.radius * &self.radius
    }

    /// True if the two closed disks are disjoint.
    pub fn disjoint(&self, other: &ComplexBall) -> bool {
        let dr = &self.center.0 - &other.center.0;
        let di = &self.center.1 - &other.center.1;
        let s = &self.radius + &other.radius;
        &dr * &dr + &di * &di > &s * &s
    }
}
