//! Exact scalars, univariate polynomials and rational functions over ℚ, and
//! the Barnes G-function at positive integers.

mod poly;
mod ratfunc;

pub use num_rational::BigRational;
pub use poly::PolynomialQ;
pub use ratfunc::RationalFunctionQ;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    (0..k as u64).fold(BigUint::one(), |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Barnes G at a positive integer: G(n) = 1!·2!·…·(n−2)!.
pub fn barnes_g(n: i64) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "Barnes G is only evaluated at positive integers, got {n}"
        )));
    }
    let mut acc = BigUint::one();
    let mut fact = BigUint::one();
    for i in 1..=(n - 2).max(0) as u64 {
        fact *= i;
        acc *= &fact;
    }
    Ok(acc)
}

/// Determinant of a square matrix over ℚ by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let inv = p.recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            let (top, bottom) = m.split_at_mut(r);
            for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= &factor * src;
            }
        }
    }
    det
}
