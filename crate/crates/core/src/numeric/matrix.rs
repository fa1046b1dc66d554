//! Small dense rational matrices.

use num_traits::{One, Zero};

use super::poly::{interpolate, QPoly};
use super::rational::{int, Rational};

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Determinant by Gaussian elimination over the rationals.
pub fn det(a: &Matrix) -> Rational {
    let mut m = a.clone();
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for k in c..cols {
                let t = &f * &m[r][k];
                m[i][k] -= t;
            }
        }
        r += 1;
    }
    r
}

/// `det(xI - A)`, by evaluation at integer points and interpolation.
pub fn charpoly(a: &Matrix) -> QPoly {
    let n = a.len();
    let xs: Vec<Rational> = (0..=n as i64).map(int).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let m: Matrix = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let d = if i == j { x.clone() } else { Rational::zero() };
                            d - &a[i][j]
                        })
                        .collect()
                })
                .collect();
            det(&m)
        })
        .collect();
    interpolate(&xs, &ys)
}
