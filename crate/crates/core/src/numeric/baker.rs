//! Diophantine gap bounds with configurable constants.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::algebraic::AlgebraicNumber;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `1 / n^{(sa + sb)^c}` for representation sizes `sa`, `sb`.
pub fn baker_gap_from_sizes(sa: u64, sb: u64, n: u64, c: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("baker gap needs n >= 2, got {n}")));
    }
    let exp = BigInt::from(sa + sb).pow(c);
    let exp = u32::try_from(exp)
        .map_err(|_| Error::Unsupported("baker gap exponent too large to materialize".into()))?;
    Ok(Rational::new(BigInt::one(), BigInt::from(n).pow(exp)))
}

/// Lower bound `1 / n^{(‖α‖+‖β‖)^C}` on `|α^n − β|`, valid when `c` is a
/// valid constant for the underlying linear-forms-in-logarithms estimate.
pub fn baker_gap(alpha: &AlgebraicNumber, beta: &AlgebraicNumber, n: u64, c: u32) -> Result<Rational> {
    baker_gap_from_sizes(alpha.size_bits(), beta.size_bits(), n, c)
}

/// `log2` of the reciprocal gap: `(sa + sb)^c · log2 n`, as an exact upper
/// bound `(sa + sb)^c · ⌈log2 n⌉`.
pub fn baker_gap_log2(sa: u64, sb: u64, n: &BigInt, c: u32) -> BigInt {
    BigInt::from(sa + sb).pow(c) * BigInt::from(n.bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::rat;

    #[test]
    fn examples() {
        assert_eq!(baker_gap_from_sizes(8, 2, 2, 1).unwrap(), rat(1, 1024));
        assert_eq!(baker_gap_from_sizes(8, 2, 2, 0).unwrap(), rat(1, 2));
        assert!(baker_gap_from_sizes(8, 2, 1, 1).is_err());
        let one = AlgebraicNumber::one();
        assert!(baker_gap(&one, &one, 0, 1).is_err());
    }
}
