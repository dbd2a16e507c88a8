//! Exact arithmetic over cyclotomic fields with formal Laurent variables,
//! and dense linear algebra on top of it.

mod cyclotomic;
mod matrix;
mod parse;
mod scalar;

pub use matrix::{ExactMatrix, Inverse, MatrixError};
pub use parse::{parse_scalar, ParseScalarError};
pub use scalar::{sign, CycScalar, Monomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("root-of-unity order must be odd and at least 3, got {0}")]
    BadEll(i64),
}

pub fn check_ell(ell: i64) -> Result<u32, ExactError> {
    if ell < 3 || ell % 2 == 0 || ell > 10_001 {
        return Err(ExactError::BadEll(ell));
    }
    Ok(ell as u32)
}

/// q = ζ_ℓ raised to `k`.
pub fn q_pow(ell: u32, k: i64) -> CycScalar {
    CycScalar::zeta(ell, k)
}

/// Quantum integer [n] = (q^n − q^{−n})/(q − q^{−1}) at q = ζ_ℓ.
pub fn quantum_integer(n: i64, ell: i64) -> Result<CycScalar, ExactError> {
    let ell = check_ell(ell)?;
    Ok(quantum_integer_unchecked(n, ell))
}

pub(crate) fn quantum_integer_unchecked(n: i64, ell: u32) -> CycScalar {
    // [n] = Σ_{j=0}^{n−1} q^{n−1−2j}, and [−n] = −[n]
    let m = n.abs();
    let s: CycScalar = (0..m).map(|j| q_pow(ell, m - 1 - 2 * j)).sum();
    if n < 0 {
        -s
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_integer_examples() {
        assert!(quantum_integer(1, 5).unwrap().is_one());
        assert!(quantum_integer(5, 5).unwrap().is_zero());
        assert_eq!(quantum_integer(2, 3).unwrap(), CycScalar::from_integer(-1));
        assert!(quantum_integer(0, 7).unwrap().is_zero());
        assert_eq!(quantum_integer(-3, 7).unwrap(), -quantum_integer(3, 7).unwrap());
        assert!(quantum_integer(1, 4).is_err());
        assert!(quantum_integer(1, 1).is_err());
    }

    #[test]
    fn quantum_integer_matches_defining_quotient() {
        let ell = 7;
        let q = q_pow(ell, 1);
        let den = &q - &q.pow(-1).unwrap();
        for n in -9..10 {
            let num = &q.pow(n).unwrap() - &q.pow(-n).unwrap();
            assert_eq!(&quantum_integer(n, ell as i64).unwrap() * &den, num);
        }
    }
}
