//! Finite unions of open arcs on the unit circle whose endpoints are
//! rotations `γ^{-n} z` of finitely many algebraic base points `z`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::algebraic::{alg_conj, alg_equal, alg_mul, alg_pow, is_root_of_unity, AlgebraicNumber};
use crate::numeric::interval::RInterval;
use crate::numeric::rational::{arg_interval, floor_dyadic, pi_interval, pow2, Rational};
use crate::{Error, Result};

const MAX_PREC: u32 = 1 << 16;
const EXACT_AT: u32 = 128;

/// `γ^{-depth} · base`, where `base` indexes the registry of the owning
/// [`Torus`]. Negative depths denote forward rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    pub base: usize,
    pub depth: i64,
}

impl TorusPoint {
    /// The point `1`.
    pub const ONE: TorusPoint = TorusPoint { base: 0, depth: 0 };

    /// `γ^n`.
    pub fn gamma_power(n: i64) -> Self {
        TorusPoint { base: 0, depth: -n }
    }
}

/// Open arc traversed counterclockwise from `start` to `end`. When the two
/// coincide the arc is the circle minus that point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub start: TorusPoint,
    pub end: TorusPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusSet {
    Full,
    /// Sorted by start angle; pairwise disjoint.
    Arcs(Vec<Arc>),
}

impl TorusSet {
    pub fn empty() -> Self {
        TorusSet::Arcs(vec![])
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, TorusSet::Arcs(a) if a.is_empty())
    }

    pub fn is_full(&self) -> bool {
        matches!(self, TorusSet::Full)
    }

    pub fn arcs(&self) -> &[Arc] {
        match self {
            TorusSet::Full => &[],
            TorusSet::Arcs(a) => a,
        }
    }

    pub fn max_depth(&self) -> i64 {
        self.arcs()
            .iter()
            .map(|a| a.start.depth.max(a.end.depth))
            .max()
            .unwrap_or(0)
    }
}

struct Base {
    z: AlgebraicNumber,
    angle: Option<(u32, RInterval)>,
}

#[derive(Default)]
struct Caches {
    gamma_angle: Option<(u32, RInterval)>,
    gamma: Option<AlgebraicNumber>,
    two_pi: HashMap<u32, RInterval>,
    equal: HashMap<(usize, usize, i64), bool>,
}

/// Rotation context: the angle `γ` (not a root of unity) and the registry of
/// base points.
pub struct Torus {
    gamma: AlgebraicNumber,
    bases: Mutex<Vec<Base>>,
    caches: Mutex<Caches>,
}

impl std::fmt::Debug for Torus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Torus(γ = {:?}, {} bases)", self.gamma, self.bases.lock().unwrap().len())
    }
}

fn eps(prec: u32) -> Rational {
    Rational::new(BigInt::one(), pow2(prec))
}

impl Torus {
    pub fn new(gamma: AlgebraicNumber) -> Result<Self> {
        if is_root_of_unity(&gamma)?.is_some() {
            return Err(Error::WrongRegime("γ is a root of unity".into()));
        }
        Ok(Torus {
            gamma,
            bases: Mutex::new(vec![Base {
                z: AlgebraicNumber::one(),
                angle: Some((u32::MAX, RInterval::zero())),
            }]),
            caches: Mutex::new(Caches::default()),
        })
    }

    pub fn gamma(&self) -> &AlgebraicNumber {
        &self.gamma
    }

    /// Registers a point of modulus one, reusing an existing entry when the
    /// value is already known.
    pub fn register(&self, z: AlgebraicNumber) -> TorusPoint {
        let n = self.bases.lock().unwrap().len();
        for id in 0..n {
            let existing = self.bases.lock().unwrap()[id].z.clone();
            if alg_equal(&existing, &z) {
                return TorusPoint { base: id, depth: 0 };
            }
        }
        let mut b = self.bases.lock().unwrap();
        b.push(Base { z, angle: None });
        TorusPoint { base: b.len() - 1, depth: 0 }
    }

    pub fn base_value(&self, id: usize) -> AlgebraicNumber {
        self.bases.lock().unwrap()[id].z.clone()
    }

    /// The algebraic value of a point.
    pub fn value(&self, p: TorusPoint) -> AlgebraicNumber {
        let z = self.base_value(p.base);
        if p.depth == 0 {
            return z;
        }
        let g = if p.depth > 0 { alg_conj(&self.gamma) } else { self.gamma.clone() };
        alg_mul(&alg_pow(&g, p.depth.unsigned_abs() as u32), &z)
    }

    fn two_pi(&self, prec: u32) -> RInterval {
        let mut c = self.caches.lock().unwrap();
        c.two_pi
            .entry(prec)
            .or_insert_with(|| pi_interval(prec + 2).scale(&Rational::from_integer(BigInt::from(2))))
            .clone()
    }

    fn angle_of(z: &AlgebraicNumber, prec: u32) -> (AlgebraicNumber, RInterval) {
        let mut p = prec + 4;
        loop {
            let r = z.refined(&eps(p));
            let e = r.enclosure(p);
            if let Some(a) = arg_interval(&e.re, &e.im, p) {
                if a.width() <= eps(prec) {
                    return (r, a);
                }
            }
            p += p / 2 + 8;
        }
    }

    fn base_angle(&self, id: usize, prec: u32) -> RInterval {
        let z = {
            let b = self.bases.lock().unwrap();
            if let Some((p, a)) = &b[id].angle {
                if *p >= prec {
                    return a.clone();
                }
            }
            b[id].z.clone()
        };
        let (r, a) = Self::angle_of(&z, prec);
        let mut b = self.bases.lock().unwrap();
        b[id].z = r;
        b[id].angle = Some((prec, a.clone()));
        a
    }

    fn gamma_angle(&self, prec: u32) -> RInterval {
        let g = {
            let mut c = self.caches.lock().unwrap();
            if let Some((p, a)) = &c.gamma_angle {
                if *p >= prec {
                    return a.clone();
                }
            }
            c.gamma.get_or_insert_with(|| self.gamma.clone()).clone()
        };
        let (r, a) = Self::angle_of(&g, prec);
        let mut c = self.caches.lock().unwrap();
        c.gamma = Some(r);
        c.gamma_angle = Some((prec, a.clone()));
        a
    }

    /// Unreduced angle enclosure of width about `2^-prec`.
    fn raw_angle(&self, p: TorusPoint, prec: u32) -> RInterval {
        let base = self.base_angle(p.base, prec + 1);
        if p.depth == 0 {
            return base;
        }
        let extra = 64 - p.depth.unsigned_abs().leading_zeros();
        let g = self.gamma_angle(prec + extra + 2);
        let d = Rational::from_integer(BigInt::from(p.depth));
        &base - &g.scale(&d)
    }

    /// Angle enclosure in `[0, 2π)`, or `None` if it straddles `0`.
    fn angle(&self, p: TorusPoint, prec: u32) -> Option<RInterval> {
        if p == TorusPoint::ONE {
            return Some(RInterval::zero());
        }
        let a = self.raw_angle(p, prec);
        let approx = self.two_pi(16);
        let k = (&a.lo / &approx.lo).floor().to_integer();
        let a = if k.is_zero() {
            a
        } else {
            let extra = k.bits() as u32;
            let tp = self.two_pi(prec + extra + 2);
            &a - &tp.scale(&Rational::from_integer(k))
        };
        let tp = self.two_pi(prec + 2);
        let a = if a.hi.is_negative() {
            &a + &tp
        } else if a.lo >= tp.hi {
            &a - &tp
        } else {
            a
        };
        if a.lo.is_negative() || a.hi >= tp.lo {
            None
        } else {
            Some(a)
        }
    }

    /// Exact equality of point values.
    pub fn equal(&self, p: TorusPoint, q: TorusPoint) -> bool {
        if p == q {
            return true;
        }
        if p.base == q.base {
            return false;
        }
        let key = if p.base < q.base {
            (p.base, q.base, p.depth - q.depth)
        } else {
            (q.base, p.base, q.depth - p.depth)
        };
        if let Some(&r) = self.caches.lock().unwrap().equal.get(&key) {
            return r;
        }
        // γ^{-dp} zp = γ^{-dq} zq  ⇔  zp = γ^{dp-dq} zq
        let (zp, zq, k) = (self.base_value(key.0), self.base_value(key.1), key.2);
        let g = if k >= 0 { self.gamma.clone() } else { alg_conj(&self.gamma) };
        let r = alg_equal(&zp, &alg_mul(&alg_pow(&g, k.unsigned_abs() as u32), &zq));
        self.caches.lock().unwrap().equal.insert(key, r);
        r
    }

    /// Counterclockwise order of angles in `[0, 2π)` measured from `1`.
    pub fn cmp_points(&self, p: TorusPoint, q: TorusPoint) -> Ordering {
        if p == q {
            return Ordering::Equal;
        }
        let mut prec = 48;
        loop {
            let exact = prec >= EXACT_AT;
            if exact && self.equal(p, q) {
                return Ordering::Equal;
            }
            let a = self.angle(p, prec).or_else(|| (exact && self.equal(p, TorusPoint::ONE)).then(RInterval::zero));
            let b = self.angle(q, prec).or_else(|| (exact && self.equal(q, TorusPoint::ONE)).then(RInterval::zero));
            if let (Some(a), Some(b)) = (&a, &b) {
                if a.hi < b.lo {
                    return Ordering::Less;
                }
                if b.hi < a.lo {
                    return Ordering::Greater;
                }
            }
            prec *= 2;
            assert!(prec <= MAX_PREC, "angle comparison did not resolve");
        }
    }

    /// Orders `a` and `b` counterclockwise starting from `reference`.
    pub fn circular_compare(&self, a: TorusPoint, b: TorusPoint, reference: TorusPoint) -> Ordering {
        let ab = self.cmp_points(a, b);
        if ab == Ordering::Equal {
            return ab;
        }
        let after = |x| self.cmp_points(x, reference) != Ordering::Less;
        match (after(a), after(b)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => ab,
        }
    }

    pub fn is_one(&self, p: TorusPoint) -> bool {
        self.equal(p, TorusPoint::ONE)
    }

    /// Angle of a point in `[0, 2π)` with width at most `2^-prec`.
    pub fn angle_enclosure(&self, p: TorusPoint, prec: u32) -> RInterval {
        let mut q = prec;
        loop {
            if let Some(a) = self.angle(p, q) {
                return a;
            }
            if q >= EXACT_AT && self.is_one(p) {
                return RInterval::zero();
            }
            q *= 2;
        }
    }
}

/// Membership of every breakpoint and every open segment between
/// consecutive breakpoints.
struct Sweep {
    points: Vec<TorusPoint>,
    /// `members[s]` holds, for set `s`, `[p0, s0, p1, s1, ...]` where `sj` is
    /// the segment from breakpoint `j` to breakpoint `j + 1`.
    members: Vec<Vec<bool>>,
}

impl Torus {
    fn sweep(&self, sets: &[&TorusSet]) -> Sweep {
        let mut ends: Vec<(TorusPoint, usize, usize, bool)> = Vec::new();
        for (s, set) in sets.iter().enumerate() {
            for (i, a) in set.arcs().iter().enumerate() {
                ends.push((a.start, s, i, true));
                ends.push((a.end, s, i, false));
            }
        }
        ends.sort_by(|x, y| self.cmp_points(x.0, y.0));
        let mut points: Vec<TorusPoint> = Vec::new();
        let mut index: HashMap<(usize, usize, bool), usize> = HashMap::new();
        for (p, s, i, st) in ends {
            let same = points.last().is_some_and(|&q| self.cmp_points(q, p) == Ordering::Equal);
            if same {
                let last = points.last_mut().unwrap();
                if p.depth.abs() < last.depth.abs() {
                    *last = p;
                }
            } else {
                points.push(p);
            }
            index.insert((s, i, st), points.len() - 1);
        }
        let m = points.len();
        let members = sets
            .iter()
            .enumerate()
            .map(|(s, set)| match set {
                TorusSet::Full => vec![true; 2 * m.max(1)],
                TorusSet::Arcs(arcs) => {
                    let mut v = vec![false; 2 * m.max(1)];
                    for i in 0..arcs.len() {
                        let a = index[&(s, i, true)];
                        let b = index[&(s, i, false)];
                        let mut j = a;
                        loop {
                            v[2 * j + 1] = true;
                            j = (j + 1) % m;
                            if j == b {
                                break;
                            }
                            v[2 * j] = true;
                        }
                    }
                    v
                }
            })
            .collect();
        Sweep { points, members }
    }

    fn rebuild(&self, points: &[TorusPoint], flags: &[bool]) -> TorusSet {
        let m = points.len();
        if flags.iter().all(|&f| f) {
            return TorusSet::Full;
        }
        if m == 0 {
            return TorusSet::empty();
        }
        let n = 2 * m;
        let first_false = flags.iter().position(|&f| !f).unwrap();
        let mut arcs = Vec::new();
        let mut k = 1;
        while k <= n {
            let i = (first_false + k) % n;
            if flags[i] && i % 2 == 1 {
                // segment run starting at breakpoint i / 2
                let start = i / 2;
                let mut j = k;
                while j < n && flags[(first_false + j + 1) % n] {
                    j += 1;
                }
                let last = (first_false + j) % n;
                let end = if last % 2 == 1 { (last / 2 + 1) % m } else { last / 2 };
                arcs.push(Arc {
                    start: points[start],
                    end: points[end],
                });
                k = j + 1;
            } else {
                k += 1;
            }
        }
        arcs.sort_by(|a, b| self.cmp_points(a.start, b.start));
        TorusSet::Arcs(arcs)
    }

    fn combine(&self, sets: &[&TorusSet], op: impl Fn(&[bool]) -> bool) -> TorusSet {
        let sw = self.sweep(sets);
        let len = sw.members.first().map_or(0, |v| v.len());
        let flags: Vec<bool> = (0..len)
            .map(|i| {
                let bits: Vec<bool> = sw.members.iter().map(|v| v[i]).collect();
                op(&bits)
            })
            .collect();
        if sw.points.is_empty() {
            return if flags.first().copied().unwrap_or(false) {
                TorusSet::Full
            } else {
                TorusSet::empty()
            };
        }
        self.rebuild(&sw.points, &flags)
    }

    pub fn union(&self, a: &TorusSet, b: &TorusSet) -> TorusSet {
        if a.is_empty() || b.is_full() {
            return b.clone();
        }
        if b.is_empty() || a.is_full() {
            return a.clone();
        }
        self.combine(&[a, b], |v| v[0] || v[1])
    }

    pub fn intersect(&self, a: &TorusSet, b: &TorusSet) -> TorusSet {
        if a.is_empty() || b.is_full() {
            return a.clone();
        }
        if b.is_empty() || a.is_full() {
            return b.clone();
        }
        self.combine(&[a, b], |v| v[0] && v[1])
    }

    pub fn is_subset(&self, a: &TorusSet, b: &TorusSet) -> bool {
        if a.is_empty() || b.is_full() {
            return true;
        }
        let sw = self.sweep(&[a, b]);
        sw.members[0].iter().zip(&sw.members[1]).all(|(&x, &y)| !x || y)
    }

    /// Point-set equality.
    pub fn set_eq(&self, a: &TorusSet, b: &TorusSet) -> bool {
        self.is_subset(a, b) && self.is_subset(b, a)
    }

    /// Re-sorts and merges; a no-op on sets produced by this module.
    pub fn canonicalize(&self, a: &TorusSet) -> TorusSet {
        self.combine(&[a], |v| v[0])
    }

    /// `γ^{-steps} · A`.
    pub fn rotate_inv_gamma(&self, a: &TorusSet, steps: i64) -> TorusSet {
        match a {
            TorusSet::Full => TorusSet::Full,
            TorusSet::Arcs(arcs) => {
                let mut out: Vec<Arc> = arcs
                    .iter()
                    .map(|x| Arc {
                        start: TorusPoint { depth: x.start.depth + steps, ..x.start },
                        end: TorusPoint { depth: x.end.depth + steps, ..x.end },
                    })
                    .collect();
                out.sort_by(|x, y| self.cmp_points(x.start, y.start));
                TorusSet::Arcs(out)
            }
        }
    }

    /// Strict membership in an open arc.
    pub fn arc_contains(&self, arc: &Arc, p: TorusPoint) -> bool {
        let after_start = self.cmp_points(arc.start, p);
        let before_end = self.cmp_points(p, arc.end);
        if after_start == Ordering::Equal || before_end == Ordering::Equal {
            return false;
        }
        match self.cmp_points(arc.start, arc.end) {
            Ordering::Equal => true,
            Ordering::Less => after_start == Ordering::Less && before_end == Ordering::Less,
            Ordering::Greater => after_start == Ordering::Less || before_end == Ordering::Less,
        }
    }

    pub fn contains(&self, a: &TorusSet, p: TorusPoint) -> bool {
        match a {
            TorusSet::Full => true,
            TorusSet::Arcs(arcs) => arcs.iter().any(|x| self.arc_contains(x, p)),
        }
    }

    /// Is `γ^n ∈ A`?
    pub fn contains_gamma_power(&self, a: &TorusSet, n: u64) -> bool {
        self.contains(a, TorusPoint::gamma_power(n as i64))
    }

    /// Rational lower bound on the length of an arc, in radians.
    pub fn arc_length_lower(&self, arc: &Arc) -> Rational {
        let mut prec = 32;
        loop {
            let tp = self.two_pi(prec);
            if self.equal(arc.start, arc.end) {
                return floor_dyadic(&tp.lo, prec);
            }
            let s = self.angle_enclosure(arc.start, prec);
            let e = self.angle_enclosure(arc.end, prec);
            let len = if e.lo > s.hi { &e.lo - &s.hi } else { &(&e.lo - &s.hi) + &tp.lo };
            if len.is_positive() && (e.hi < s.lo || e.lo > s.hi) {
                return floor_dyadic(&len, prec + 8);
            }
            prec *= 2;
        }
    }

    fn arc_lengths(&self, a: &TorusSet) -> Result<Vec<Rational>> {
        match a {
            TorusSet::Full => Err(Error::Domain("component length of the full circle".into())),
            TorusSet::Arcs(arcs) if arcs.is_empty() => {
                Err(Error::Domain("component length of the empty set".into()))
            }
            TorusSet::Arcs(arcs) => Ok(arcs.iter().map(|x| self.arc_length_lower(x)).collect()),
        }
    }

    /// Lower bound on the length of the shortest component.
    pub fn min_component_length(&self, a: &TorusSet) -> Result<Rational> {
        Ok(self.arc_lengths(a)?.into_iter().min().unwrap())
    }

    /// Lower bound on the length of the longest component (`2π` for `Full`).
    pub fn max_component_length(&self, a: &TorusSet) -> Result<Rational> {
        if a.is_full() {
            return Ok(floor_dyadic(&self.two_pi(64).lo, 64));
        }
        Ok(self.arc_lengths(a)?.into_iter().max().unwrap())
    }
}

/// Upper bound `⌈2π (2π/l)^e⌉` for a lower bound `l` on a component length.
pub fn return_bound_from(l: &Rational, exponent: &BigUint) -> Result<BigInt> {
    if !l.is_positive() {
        return Err(Error::Domain("component length must be positive".into()));
    }
    let e = exponent
        .to_u32()
        .filter(|&e| e <= 1 << 16)
        .ok_or_else(|| Error::Unsupported(format!("return bound exponent {} too large to materialize", exponent)))?;
    let tp = pi_interval(64).hi * Rational::from_integer(BigInt::from(2));
    let ratio = &tp / l;
    let ratio = if ratio < Rational::one() { Rational::one() } else { ratio };
    let v = &tp * num_traits::pow(ratio, e as usize);
    Ok(v.ceil().to_integer())
}

/// `log2` upper bound of [`return_bound_from`] without materializing it.
pub fn return_bound_log2(l: &Rational, exponent: &BigUint) -> BigInt {
    let tp = pi_interval(64).hi * Rational::from_integer(BigInt::from(2));
    let ratio = &tp / l;
    let bits = |q: &Rational| -> BigInt {
        let c = q.ceil().to_integer();
        BigInt::from(c.bits())
    };
    let per = if ratio <= Rational::one() { BigInt::zero() } else { bits(&ratio) };
    bits(&tp) + per * BigInt::from(exponent.clone())
}

/// Result of an until/release construction.
#[derive(Clone, Debug)]
pub struct Construction {
    pub set: TorusSet,
    /// Number of rotation steps after which no further term changes the set.
    pub steps: u64,
}

impl Torus {
    /// `b = ⌈2π (2π/l)^{‖γ‖^D}⌉` with `l` the length of the longest component.
    pub fn return_bound(&self, a: &TorusSet, d: u32) -> Result<BigInt> {
        let l = self.max_component_length(a)?;
        return_bound_from(&l, &self.gamma_size_pow(d))
    }

    pub fn gamma_size_pow(&self, d: u32) -> BigUint {
        num_traits::pow(BigUint::from(self.gamma.size_bits()), d as usize)
    }

    /// `⋃_{Δ=0}^{b} (γ^{-Δ} J2 ∩ ⋂_{m<Δ} γ^{-m} J1)`. The union is built
    /// incrementally and stops early once every point still satisfying the
    /// running intersection is already covered, or after `b` steps. Fails
    /// when neither happens within `cap` steps.
    pub fn until_set(&self, j1: &TorusSet, j2: &TorusSet, d: u32, cap: u64) -> Result<Construction> {
        if j2.is_empty() {
            return Ok(Construction { set: TorusSet::empty(), steps: 0 });
        }
        let b = self
            .return_bound(j2, d)
            .ok()
            .and_then(|b| b.to_u64())
            .unwrap_or(u64::MAX);
        let mut union = j2.clone();
        let mut alive = j1.clone();
        let mut delta = 0u64;
        loop {
            if self.is_subset(&alive, &union) || delta >= b {
                return Ok(Construction { set: union, steps: delta });
            }
            if delta >= cap {
                return Err(Error::Unsupported(format!(
                    "until construction did not stabilise within {} steps",
                    cap
                )));
            }
            delta += 1;
            let term = self.intersect(&self.rotate_inv_gamma(j2, delta as i64), &alive);
            union = self.union(&union, &term);
            alive = self.intersect(&alive, &self.rotate_inv_gamma(j1, delta as i64));
        }
    }

    /// True if `a` misses only finitely many points. A dense orbit leaves
    /// such a set at most finitely often, so it acts as the full circle.
    pub fn is_cofinite(&self, a: &TorusSet) -> bool {
        match self.canonicalize(a) {
            TorusSet::Full => true,
            TorusSet::Arcs(v) => {
                !v.is_empty() && (0..v.len()).all(|i| self.equal(v[i].end, v[(i + 1) % v.len()].start))
            }
        }
    }

    /// `J_{φ1 R φ2}`: `J_{φ2 U (φ1 ∧ φ2)}` when `J1 ∩ J2` is nonempty,
    /// otherwise the full circle if `J2` is cofinite and the empty set if not.
    pub fn release_set(&self, j1: &TorusSet, j2: &TorusSet, d: u32, cap: u64) -> Result<Construction> {
        let both = self.intersect(j1, j2);
        if both.is_empty() {
            if self.is_cofinite(j2) {
                return Ok(Construction { set: TorusSet::Full, steps: 0 });
            }
            // every point leaves J2 within `steps` rotations
            let mut alive = j2.clone();
            let mut delta = 0u64;
            while !alive.is_empty() {
                if delta >= cap {
                    return Err(Error::Unsupported(format!(
                        "release construction did not stabilise within {} steps",
                        cap
                    )));
                }
                delta += 1;
                alive = self.intersect(&alive, &self.rotate_inv_gamma(j2, delta as i64));
            }
            return Ok(Construction { set: TorusSet::empty(), steps: delta });
        }
        self.until_set(j2, &both, d, cap)
    }

    /// `⋃_{Δ=0}^{k} (γ^{-Δ} J2 ∩ ⋂_{m<Δ} γ^{-m} J1)`.
    pub fn bounded_until_set(&self, j1: &TorusSet, j2: &TorusSet, k: u64) -> TorusSet {
        let mut union = j2.clone();
        let mut alive = j1.clone();
        for delta in 1..=k as i64 {
            if alive.is_empty() {
                break;
            }
            let term = self.intersect(&self.rotate_inv_gamma(j2, delta), &alive);
            union = self.union(&union, &term);
            alive = self.intersect(&alive, &self.rotate_inv_gamma(j1, delta));
        }
        union
    }

    /// `⋂_{Δ=0}^{k} (γ^{-Δ} J2 ∪ ⋃_{m<Δ} γ^{-m} J1)`.
    pub fn bounded_release_set(&self, j1: &TorusSet, j2: &TorusSet, k: u64) -> TorusSet {
        let mut acc = j2.clone();
        let mut seen = j1.clone();
        for delta in 1..=k as i64 {
            if acc.is_empty() {
                break;
            }
            acc = self.intersect(&acc, &self.union(&self.rotate_inv_gamma(j2, delta), &seen));
            seen = self.union(&seen, &self.rotate_inv_gamma(j1, delta));
        }
        acc
    }

    /// Per-arc angle enclosures (as `f64` bounds) and endpoint provenance.
    pub fn describe(&self, a: &TorusSet) -> Vec<ArcRecord> {
        let f = |p: TorusPoint| {
            let e = self.angle_enclosure(p, 53);
            (crate::numeric::interval::to_f64(&e.lo), crate::numeric::interval::to_f64(&e.hi))
        };
        a.arcs()
            .iter()
            .map(|x| ArcRecord {
                start: f(x.start),
                end: f(x.end),
                start_origin: (x.start.base, x.start.depth),
                end_origin: (x.end.base, x.end.depth),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ArcRecord {
    pub start: (f64, f64),
    pub end: (f64, f64),
    pub start_origin: (usize, i64),
    pub end_origin: (usize, i64),
}
