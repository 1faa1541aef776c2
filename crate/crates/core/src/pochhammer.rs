//! Generalized Pochhammer symbols `x↑μ = Π_{□∈μ} (x + c(□))` and their
//! scalar one-row / one-column specializations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{rat, PolynomialQ};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// `x↑μ`, the product of `x + content` over the cells of `μ`.
pub fn poch_up(x: &BigRational, mu: &Partition) -> BigRational {
    mu.contents()
        .into_iter()
        .fold(BigRational::one(), |acc, c| acc * (x + rat(c)))
}

/// Rising factorial `x↑n = x(x+1)…(x+n−1)`.
pub fn rising(x: &BigRational, n: usize) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, i| acc * (x + rat(i as i64)))
}

/// Falling factorial `x↓n = x(x−1)…(x−n+1)`.
///
/// Negative lengths follow `x↓(−m) = 1/((x+1)↑m)`, the extension under which
/// `(x+a−1)↓(a+b) = (x↑a)·((x−1)↓b)` holds for every `a ≥ 0` and integer `b`.
pub fn falling(x: &BigRational, n: i64) -> Result<BigRational> {
    if n >= 0 {
        return Ok((0..n).fold(BigRational::one(), |acc, i| acc * (x - rat(i))));
    }
    let denom = rising(&(x + BigRational::one()), n.unsigned_abs() as usize);
    if denom.is_zero() {
        return Err(Error::DivisionByZero(format!(
            "({x}+1)↑{} vanishes in the negative falling factorial",
            -n
        )));
    }
    Ok(denom.recip())
}

/// `Π_{□∈μ} (scale·k + c(□))` as a polynomial in `k`.
pub fn poch_poly(scale: i64, mu: &Partition) -> PolynomialQ {
    let s = BigRational::from_integer(BigInt::from(scale));
    mu.contents()
        .into_iter()
        .fold(PolynomialQ::one(), |acc, c| {
            &acc * &PolynomialQ::linear(s.clone(), rat(c))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use crate::partition::PartitionIter;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(poch_up(&rat(3), &p(&[2])), rat(12));
        assert_eq!(poch_up(&rat(2), &p(&[2, 2])), rat(12));
        assert_eq!(poch_up(&rat(-1), &p(&[1, 1])), rat(2));
        assert_eq!(poch_up(&rat(1), &p(&[1, 1]).conjugate()), rat(2));
        assert_eq!(poch_up(&rat(7), &Partition::empty()), rat(1));
    }

    #[test]
    fn one_row_and_one_column_shapes() {
        let x = ratio(5, 3);
        for n in 0..6 {
            assert_eq!(poch_up(&x, &Partition::rectangle(1, n)), rising(&x, n));
            assert_eq!(
                poch_up(&x, &Partition::rectangle(n, 1)),
                falling(&x, n as i64).unwrap()
            );
        }
    }

    #[test]
    fn negative_falling_convention() {
        assert_eq!(falling(&rat(3), -2).unwrap(), ratio(1, 20));
        assert!(matches!(
            falling(&rat(-2), -2),
            Err(Error::DivisionByZero(_))
        ));
        assert!(matches!(
            falling(&rat(-1), -1),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn consistency_identity() {
        for x in [rat(4), rat(7), ratio(9, 2), ratio(-1, 3)] {
            for a in 0..5i64 {
                for b in -6..6i64 {
                    let lhs = falling(&(&x + rat(a - 1)), a + b);
                    let rhs = falling(&(&x - rat(1)), b).map(|f| rising(&x, a as usize) * f);
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) => assert_eq!(l, r, "x={x} a={a} b={b}"),
                        (l, r) => panic!("x={x} a={a} b={b}: {l:?} vs {r:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn polynomial_form() {
        assert_eq!(poch_poly(1, &p(&[1])), PolynomialQ::x());
        assert_eq!(poch_poly(2, &p(&[2])), PolynomialQ::from_ints(&[0, 2, 4]));
        assert!(poch_poly(-1, &p(&[2])).evaluate(&rat(1)).is_zero());
        assert_eq!(poch_poly(2, &p(&[3, 1])).degree(), Some(4));
    }

    #[test]
    fn conjugation_identity_on_all_small_partitions() {
        let xs = [
            rat(0),
            rat(3),
            rat(-5),
            ratio(1, 2),
            ratio(-7, 3),
            ratio(11, 4),
        ];
        for n in 0..=20 {
            for mu in PartitionIter::new(n) {
                let conj = mu.conjugate();
                let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
                for x in &xs {
                    assert_eq!(poch_up(x, &conj), &sign * poch_up(&-x, &mu), "{mu} x={x}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn poly_matches_scalar(
            num in -50i64..50, den in 1i64..12, scale in prop::sample::select(vec![-2i64, -1, 1, 2, 3]),
            n in 0usize..8, idx in 0usize..64
        ) {
            let all: Vec<_> = PartitionIter::new(n).collect();
            let mu = &all[idx % all.len()];
            let x = ratio(num, den);
            prop_assert_eq!(
                poch_poly(scale, mu).evaluate(&x),
                poch_up(&(rat(scale) * &x), mu)
            );
        }
    }
}
