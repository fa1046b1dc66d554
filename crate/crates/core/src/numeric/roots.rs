//! Root isolation for integer polynomials.
//!
//! Real roots are counted with Sturm sequences. All roots are approximated by
//! Durand–Kerner iteration and certified with Smith's inclusion disks: when
//! the disks `D(z_i, d·|W_i|)` are pairwise disjoint, each holds exactly one
//! root.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{to_f64, ComplexBall};
use super::poly::{IntPolynomial, QPoly};
use super::rational::{
    ceil_dyadic, int, pow2, sqrt_lower, sqrt_upper, sqrt_upper_rel, Rational,
};

/// Sturm sequence of `p` (as rational polynomials).
pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        seq.push(r.scale(&int(-1)));
    }
    seq.pop();
    seq
}

fn sign_changes(seq: &[QPoly], x: &Rational) -> usize {
    let mut last = 0;
    let mut count = 0;
    for q in seq {
        let v = q.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn sturm_count(seq: &[QPoly], a: &Rational, b: &Rational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// Cauchy bound: every root has modulus below the returned value.
pub fn root_bound(p: &IntPolynomial) -> Rational {
    let lc = Rational::from_integer(p.leading().abs());
    let m = p.coeffs()[..p.degree()]
        .iter()
        .map(|c| Rational::from_integer(c.abs()) / &lc)
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &IntPolynomial) -> usize {
    let sf = p.squarefree();
    if sf.degree() == 0 {
        return 0;
    }
    let b = root_bound(&sf);
    sturm_count(&sturm_sequence(&sf.to_q()), &-b.clone(), &b)
}

/// Lower bound on the distance between distinct roots of `p`; `None` when
/// `p` has degree below two.
///
/// Returns the smaller of `√6/(d^{(d+1)/2} H^{d−1})` and Mignotte's
/// `√3·d^{−(d+2)/2}·‖p‖₂^{1−d}`, each rounded down.
pub fn mignotte_separation(p: &IntPolynomial) -> Option<Rational> {
    let d = p.degree();
    if d < 2 {
        return None;
    }
    let dq = int(d as i64);
    let h = Rational::from_integer(p.height());
    // d^{(d+1)/2} and d^{(d+2)/2}, rounded up
    let half_pow_up = |e: usize| -> Rational {
        let base = super::poly::pow_rat(&dq, e / 2);
        if e % 2 == 1 {
            base * sqrt_upper(&dq, 32)
        } else {
            base
        }
    };
    let a = sqrt_lower(&int(6), 32) / (half_pow_up(d + 1) * super::poly::pow_rat(&h, d - 1));
    let norm_up = sqrt_upper(&Rational::from_integer(p.norm2_sqr()), 32);
    let b = sqrt_lower(&int(3), 32) / (half_pow_up(d + 2) * super::poly::pow_rat(&norm_up, d - 1));
    Some(if a < b { a } else { b })
}

type C = (Rational, Rational);

fn cmul(a: &C, b: &C) -> C {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn csub(a: &C, b: &C) -> C {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cnorm(a: &C) -> Rational {
    &a.0 * &a.0 + &a.1 * &a.1
}

fn cdiv(a: &C, b: &C) -> C {
    let n = cnorm(b);
    let conj = (b.0.clone(), -b.1.clone());
    let m = cmul(a, &conj);
    (m.0 / &n, m.1 / &n)
}

fn cround(a: &C, prec: u32) -> C {
    (ceil_dyadic(&a.0, prec), ceil_dyadic(&a.1, prec))
}

fn ceval(p: &IntPolynomial, z: &C) -> C {
    let mut acc: C = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = cmul(&acc, z);
        acc.0 += Rational::from_integer(c.clone());
    }
    acc
}

fn f64_start(p: &IntPolynomial) -> Vec<(f64, f64)> {
    let d = p.degree();
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let r = to_f64(&root_bound(p)).min(1e150);
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            (r * 0.5 * t.cos(), r * 0.5 * t.sin())
        })
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return z;
    }
    let eval = |x: (f64, f64)| {
        let mut acc = (0.0f64, 0.0f64);
        for c in coeffs.iter().rev() {
            acc = (acc.0 * x.0 - acc.1 * x.1 + c, acc.0 * x.1 + acc.1 * x.0);
        }
        acc
    };
    let lc = coeffs[d];
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let num = eval(z[i]);
            let mut den = (lc, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    den = (den.0 * diff.0 - den.1 * diff.1, den.0 * diff.1 + den.1 * diff.0);
                }
            }
            let n2 = den.0 * den.0 + den.1 * den.1;
            if n2 == 0.0 || !n2.is_finite() {
                continue;
            }
            let w = (
                (num.0 * den.0 + num.1 * den.1) / n2,
                (num.1 * den.0 - num.0 * den.1) / n2,
            );
            if !w.0.is_finite() || !w.1.is_finite() {
                continue;
            }
            z[i] = (z[i].0 - w.0, z[i].1 - w.1);
            moved = moved.max(w.0.abs().max(w.1.abs()) / (1.0 + z[i].0.abs() + z[i].1.abs()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Smith radii (squared) for the approximations `z`, computed exactly.
fn smith_radii_sq(p: &IntPolynomial, z: &[C]) -> Option<Vec<Rational>> {
    let d = z.len();
    let lc = Rational::from_integer(p.leading());
    let dd = int((d * d) as i64);
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let num = ceval(p, &z[i]);
        let mut den: C = (lc.clone(), Rational::zero());
        for j in 0..d {
            if j != i {
                den = cmul(&den, &csub(&z[i], &z[j]));
            }
        }
        let dn = cnorm(&den);
        if dn.is_zero() {
            return None;
        }
        out.push(cnorm(&num) / dn * &dd);
    }
    Some(out)
}

/// One isolating disk per distinct root of the square-free `p`, each of
/// radius at most `eps`. Disks holding real roots are centred on the real
/// axis; the others do not meet it. Real roots come first, ascending.
pub fn isolate_roots(p: &IntPolynomial, eps: &Rational) -> Vec<ComplexBall> {
    let d = p.degree();
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        let c = p.coeffs();
        let r = Rational::new(-c[0].clone(), c[1].clone());
        return vec![ComplexBall::exact(r, Rational::zero())];
    }
    let n_real = count_real_roots(p);
    let eps2 = eps * eps;
    let mut z: Vec<C> = f64_start(p)
        .into_iter()
        .map(|(a, b)| {
            let a = if a.is_finite() { a } else { 1.0 };
            let b = if b.is_finite() { b } else { 0.5 };
            (
                Rational::from_float(a).unwrap_or_else(Rational::zero),
                Rational::from_float(b).unwrap_or_else(Rational::zero),
            )
        })
        .collect();
    let lc = Rational::from_integer(p.leading());
    let mut prec: u32 = 64;
    loop {
        for _ in 0..(8 + prec / 16) {
            for i in 0..d {
                let num = ceval(p, &z[i]);
                let mut den: C = (lc.clone(), Rational::zero());
                for j in 0..d {
                    if j != i {
                        den = cmul(&den, &csub(&z[i], &z[j]));
                    }
                }
                if cnorm(&den).is_zero() {
                    // perturb coincident approximations
                    z[i].1 += Rational::new(BigInt::one(), pow2(prec / 2));
                    continue;
                }
                let w = cdiv(&num, &den);
                z[i] = cround(&csub(&z[i], &w), prec);
            }
        }
        if let Some(r2) = smith_radii_sq(p, &z) {
            if let Some(balls) = certify(&z, &r2, n_real, &eps2) {
                return balls;
            }
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "root isolation failed to converge");
    }
}

fn certify(z: &[C], r2: &[Rational], n_real: usize, eps2: &Rational) -> Option<Vec<ComplexBall>> {
    let d = z.len();
    if r2.iter().any(|r| r > eps2) {
        return None;
    }
    let mut balls: Vec<ComplexBall> = z
        .iter()
        .zip(r2)
        .map(|(c, r)| ComplexBall {
            center: c.clone(),
            radius: sqrt_upper_rel(r),
        })
        .collect();
    for i in 0..d {
        for j in i + 1..d {
            if !balls[i].disjoint(&balls[j]) {
                return None;
            }
        }
    }
    let off_axis = |b: &ComplexBall| b.center.1.abs() > b.radius;
    let nonreal = balls.iter().filter(|b| off_axis(b)).count();
    if nonreal != d - n_real {
        return None;
    }
    for b in balls.iter_mut() {
        if !off_axis(b) {
            // the root is real: recentre on the axis, keeping it enclosed
            b.radius = &b.radius + b.center.1.abs();
            b.center.1 = Rational::zero();
        }
    }
    // recentring must keep the real disks disjoint and small
    for i in 0..d {
        if &balls[i].radius * &balls[i].radius > *eps2 {
            return None;
        }
        for j in i + 1..d {
            if !balls[i].disjoint(&balls[j]) {
                return None;
            }
        }
    }
    balls.sort_by(|a, b| {
        let ra = a.center.1.is_zero();
        let rb = b.center.1.is_zero();
        rb.cmp(&ra)
            .then_with(|| a.center.0.cmp(&b.center.0))
            .then_with(|| a.center.1.cmp(&b.center.1))
    });
    Some(balls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn sturm_counts_real_roots() {
        assert_eq!(count_real_roots(&p(&[-6, 11, -6, 1])), 3);
        assert_eq!(count_real_roots(&p(&[5, -6, 5])), 0);
        assert_eq!(count_real_roots(&p(&[-2, 0, 1])), 2);
    }

    #[test]
    fn isolates_mixed_roots() {
        // (x^2 + 1)(x - 3)
        let balls = isolate_roots(&p(&[-3, 1, -3, 1]), &rat(1, 1000));
        assert_eq!(balls.len(), 3);
        assert!(balls[0].contains_point(&int(3), &int(0)));
        assert!(balls.iter().any(|b| b.contains_point(&int(0), &int(1))));
        assert!(balls.iter().any(|b| b.contains_point(&int(0), &int(-1))));
    }

    #[test]
    fn mignotte_examples() {
        let m = mignotte_separation(&p(&[-2, 0, 1])).unwrap();
        assert!(to_f64(&m) <= 6f64.sqrt() / (2f64.powf(1.5) * 2.0));
        let m1 = mignotte_separation(&p(&[-1, 0, 1])).unwrap();
        assert!(m1 <= int(2));
        assert!(mignotte_separation(&p(&[1, 1])).is_none());
    }
}
