//! Factorization of integer polynomials: Berlekamp over a small prime,
//! quadratic Hensel lifting, and exhaustive recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::IntPolynomial;

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let db = b.len() - 1;
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c != 0 {
            for (j, y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * y % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => vec![],
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|x| x * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

fn reduce(f: &IntPolynomial, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

/// Kernel basis of the Berlekamp matrix `Q - I` for a monic square-free `f`.
fn berlekamp_basis(f: &Fp, p: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    // rows: x^{ip} mod f
    let mut rows: Vec<Fp> = Vec::with_capacity(n);
    let xp = {
        let mut base = vec![0, 1];
        let mut acc = vec![1u64];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_divrem(&fp_mul(&acc, &base, p), f, p).1;
            }
            base = fp_divrem(&fp_mul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut cur = vec![1u64];
    for _ in 0..n {
        rows.push(cur.clone());
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // matrix A = (Q - I)^T, solve A v = 0
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            a[j][i] = row.get(j).copied().unwrap_or(0);
        }
        a[i][i] = (a[i][i] + p - 1) % p;
    }
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let m = a[i][c];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p - m * a[r][j] % p) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - a[row][fc]) % p;
            }
            trim(v)
        })
        .collect()
}

/// Monic irreducible factors of a monic square-free polynomial mod `p`.
fn factor_mod_p(f: &Fp, p: u64) -> Vec<Fp> {
    let basis = berlekamp_basis(f, p);
    let r = basis.len();
    let mut factors = vec![f.clone()];
    for v in basis.iter().filter(|v| v.len() > 1) {
        if factors.len() == r {
            break;
        }
        let mut next = Vec::new();
        for u in factors {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut pending = vec![u];
            for s in 0..p {
                let mut still = Vec::new();
                for w in pending {
                    let g = fp_gcd(&w, &fp_sub(v, &vec![s], p), p);
                    if g.len() > 1 && g.len() < w.len() {
                        let h = fp_monic(&fp_divrem(&w, &g, p).0, p);
                        still.push(g);
                        still.push(h);
                    } else {
                        still.push(w);
                    }
                }
                pending = still;
            }
            next.extend(pending);
        }
        factors = next;
    }
    factors
}

fn berlekamp_count(f: &Fp, p: u64) -> usize {
    berlekamp_basis(f, p).len()
}

// Polynomials with BigInt coefficients reduced mod m.

fn zmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zmod(&out, m)
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    zmod(&v, m)
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    zmod(&v, m)
}

/// Division by a monic polynomial mod m.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (vec![], zmod(&r, m));
    }
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[k + j] -= &c * y;
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (zmod(&q, m), zmod(&r, m))
}

fn fp_to_z(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Extended gcd mod p: s, t with s*a + t*b = 1 (inputs coprime).
fn fp_ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fp, Fp) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    let inv = inv_mod(r0[0], p);
    let sc = |v: &Fp| trim(v.iter().map(|x| x * inv % p).collect());
    (sc(&s0), sc(&t0))
}

/// Lift `f ≡ g*h (mod p)` to `mod p^k` with `k` such that `p^k >= bound`.
/// `h` is monic; `g` carries the leading coefficient.
fn hensel_two(
    f: &[BigInt],
    g: &Fp,
    h: &Fp,
    p: u64,
    bound: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (s, t) = fp_ext_gcd(g, h, p);
    let mut m = BigInt::from(p);
    let (mut g, mut h) = (fp_to_z(g), fp_to_z(h));
    let (mut s, mut t) = (fp_to_z(&s), fp_to_z(&t));
    while &m < bound {
        let m2 = &m * &m;
        let e = zsub(f, &zmul(&g, &h, &m2), &m2);
        let (q, r) = zdivrem_monic(&zmul(&s, &e, &m2), &h, &m2);
        let g2 = zadd(&zadd(&g, &zmul(&t, &e, &m2), &m2), &zmul(&q, &g, &m2), &m2);
        let h2 = zadd(&h, &r, &m2);
        let b = zsub(
            &zadd(&zmul(&s, &g2, &m2), &zmul(&t, &h2, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, d) = zdivrem_monic(&zmul(&s, &b, &m2), &h2, &m2);
        s = zsub(&s, &d, &m2);
        t = zsub(&zsub(&t, &zmul(&t, &b, &m2), &m2), &zmul(&c, &g2, &m2), &m2);
        g = g2;
        h = h2;
        m = m2;
    }
    (g, h)
}

/// Lift all monic local factors of `f` (leading coefficient `lc`) mod `p^k`.
fn hensel_multi(f: &[BigInt], lc: &BigInt, locals: &[Fp], p: u64, bound: &BigInt) -> Vec<Vec<BigInt>> {
    if locals.len() == 1 {
        let mut m = BigInt::from(p);
        while &m < bound {
            m = &m * &m;
        }
        let inv = lc.modinv(&m).expect("leading coefficient invertible");
        return vec![zmod(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &m)];
    }
    let half = locals.len() / 2;
    let (left, right) = locals.split_at(half);
    let prod = |fs: &[Fp]| fs.iter().fold(vec![1u64], |acc, u| fp_mul(&acc, u, p));
    let lp = lc.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let g0: Fp = prod(left).iter().map(|c| c * lp % p).collect();
    let h0 = prod(right);
    let (g, h) = hensel_two(f, &trim(g0), &h0, p, bound);
    let mut out = hensel_multi(&g, lc, left, p, bound);
    out.extend(hensel_multi(&h, &BigInt::one(), right, p, bound));
    out
}

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn try_divide(f: &IntPolynomial, g: &IntPolynomial) -> Option<IntPolynomial> {
    let (q, r) = f.to_q().divrem(&g.to_q());
    if !r.is_zero() {
        return None;
    }
    if q.coeffs().iter().all(|c| c.is_integer()) {
        Some(IntPolynomial::new(q.coeffs().iter().map(|c| c.to_integer()).collect()))
    } else {
        None
    }
}

fn factor_squarefree_primitive(f: &IntPolynomial) -> Vec<IntPolynomial> {
    if f.degree() <= 1 {
        return vec![f.clone()];
    }
    let lc = f.leading();
    let mut best: Option<(u64, usize)> = None;
    let mut good = 0;
    for &p in PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_monic(&reduce(f, p), p);
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let r = berlekamp_count(&fp, p);
        if best.is_none_or(|(_, br)| r < br) {
            best = Some((p, r));
        }
        good += 1;
        if r == 1 || good >= 6 {
            break;
        }
    }
    let (p, r) = best.expect("no suitable prime for factorization");
    if r == 1 {
        return vec![f.clone()];
    }
    let fp = fp_monic(&reduce(f, p), p);
    let locals = factor_mod_p(&fp, p);
    // coefficient bound for factors of lc*f
    let norm = f.norm2_sqr().sqrt() + 1;
    let bound = norm * (BigInt::one() << f.degree()) * lc.abs() * 2 + 1;
    let lifted = hensel_multi(f.coeffs(), &lc, &locals, p, &bound);
    let mut m = BigInt::from(p);
    while m < bound {
        m = &m * &m;
    }
    recombine(f.clone(), lifted, &m)
}

fn recombine(mut f: IntPolynomial, mut lifted: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<IntPolynomial> {
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let n = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = f.leading();
            let mut g = vec![lc.clone()];
            for &i in &idx {
                g = zmul(&g, &lifted[i], m);
            }
            let cand = IntPolynomial::new(symmetric(&g, m)).primitive();
            if let Some(q) = try_divide(&f, &cand) {
                out.push(cand);
                f = q.primitive();
                let mut k = 0;
                lifted.retain(|_| {
                    let keep = !idx.contains(&k);
                    k += 1;
                    keep
                });
                continue 'outer;
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    size += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] < n - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if f.degree() > 0 {
        out.push(f.primitive());
    }
    out
}

/// Irreducible factors over the integers with multiplicities, each primitive
/// with positive leading coefficient. Constant content is dropped.
pub fn factor(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let f = f.primitive();
    if f.degree() == 0 {
        return vec![];
    }
    let mut sf = f.squarefree();
    let mut irr = Vec::new();
    if sf.coeffs()[0].is_zero() {
        irr.push(IntPolynomial::from_i64(&[0, 1]));
        sf = IntPolynomial::new(sf.coeffs()[1..].to_vec());
    }
    if sf.degree() > 0 {
        irr.extend(factor_squarefree_primitive(&sf.primitive()));
    }
    let mut out: Vec<(IntPolynomial, usize)> = irr
        .into_iter()
        .map(|g| {
            let mut count = 0;
            let mut rest = f.clone();
            while let Some(q) = try_divide(&rest, &g) {
                count += 1;
                rest = q;
            }
            (g, count)
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    out
}

/// Distinct irreducible factors, without multiplicities.
pub fn irreducible_factors(f: &IntPolynomial) -> Vec<IntPolynomial> {
    factor(f).into_iter().map(|(g, _)| g).collect()
}

pub fn is_irreducible(f: &IntPolynomial) -> bool {
    let fs = factor(f);
    fs.len() == 1 && fs[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn product(fs: &[(IntPolynomial, usize)]) -> IntPolynomial {
        let mut acc = p(&[1]);
        for (g, m) in fs {
            for _ in 0..*m {
                acc = acc.mul(g);
            }
        }
        acc
    }

    #[test]
    fn factors_cubic_with_rational_roots() {
        let fs = factor(&p(&[-6, 11, -6, 1]));
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(g, m)| g.degree() == 1 && *m == 1));
    }

    #[test]
    fn keeps_irreducibles() {
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])));
        assert!(is_irreducible(&p(&[-2, 0, 1])));
        assert!(is_irreducible(&p(&[5, -6, 5])));
    }

    #[test]
    fn splits_swinnerton_dyer_like_product() {
        // (x^4 - 10x^2 + 1)(x^2 + x + 1)(3x - 2)^2
        let f = p(&[1, 0, -10, 0, 1])
            .mul(&p(&[1, 1, 1]))
            .mul(&p(&[-2, 3]))
            .mul(&p(&[-2, 3]));
        let fs = factor(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f.primitive());
    }

    #[test]
    fn cyclotomic_x12_minus_1() {
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let fs = factor(&p(&c));
        // divisors of 12: 1,2,3,4,6,12
        assert_eq!(fs.len(), 6);
    }
}
