use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial over ℚ with ascending coefficients.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolynomialQ {
    coeffs: Vec<BigRational>,
}

impl PolynomialQ {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `a·x + b`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides through by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// True when every odd-degree coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    /// Returns `(quot, rem)` with `self = divisor·quot + rem` and
    /// `deg rem < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero("polynomial division by zero".into()));
        };
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let q = &rem[i + dd] * &lc_inv;
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &q * d;
                rem[i + j] -= t;
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("divisor is nonzero");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Rational roots, with multiplicity, found by the rational root test on
    /// the primitive integer form. Only used to inspect small denominators.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.is_zero() {
            return roots;
        }
        while p.coeffs.first().is_some_and(|c| c.is_zero()) {
            roots.push(BigRational::zero());
            p = Self::new(p.coeffs[1..].to_vec());
        }
        let ints = p.integer_coeffs();
        let (Some(c0), Some(cn)) = (ints.first(), ints.last()) else {
            return roots;
        };
        let nums = divisors(&c0.abs());
        let dens = divisors(&cn.abs());
        for n in &nums {
            for d in &dens {
                for sign in [1i32, -1] {
                    let cand = BigRational::new(n * BigInt::from(sign), d.clone());
                    while p.degree().unwrap_or(0) > 0 && p.evaluate(&cand).is_zero() {
                        let lin = Self::linear(BigRational::one(), -cand.clone());
                        p = p.divrem(&lin).expect("linear divisor").0;
                        roots.push(cand.clone());
                    }
                }
            }
        }
        roots
    }

    // Integer coefficients of a scalar multiple of self.
    fn integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            num_integer::lcm(acc, c.denom().clone())
        });
        self.coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect()
    }

    /// Human-readable rendering in the variable `var`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if mag.is_integer() {
                out.push_str(&format!("{mag}{mono}"));
            } else {
                out.push_str(&format!("({mag}){mono}"));
            }
        }
        out
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Coefficients here are small; trial division is plenty.
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let other = n / &i;
            if other != i {
                out.push(other);
            }
        }
        i += 1;
    }
    out
}

impl fmt::Debug for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolynomialQ({})", self.render("x"))
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &PolynomialQ {
    type Output = PolynomialQ;

    fn add(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PolynomialQ {
    type Output = PolynomialQ;

    fn sub(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &PolynomialQ {
    type Output = PolynomialQ;

    fn mul(self, rhs: &PolynomialQ) -> PolynomialQ {
        if self.is_zero() || rhs.is_zero() {
            return PolynomialQ::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialQ::new(out)
    }
}

impl Neg for &PolynomialQ {
    type Output = PolynomialQ;

    fn neg(self) -> PolynomialQ {
        PolynomialQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for PolynomialQ {
            type Output = PolynomialQ;
            fn $method(self, rhs: PolynomialQ) -> PolynomialQ {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = PolynomialQ::from_ints(&[-1, 0, 1]);
        let b = PolynomialQ::from_ints(&[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        let c = PolynomialQ::from_ints(&[2, -2]);
        assert_eq!(a.gcd(&c), b);
        assert!(PolynomialQ::zero().gcd(&PolynomialQ::zero()).is_zero());
        assert_eq!(a.gcd(&PolynomialQ::zero()), a);
    }

    #[test]
    fn evaluates_at_half() {
        let p = PolynomialQ::from_ints(&[0, 2, 4]);
        assert_eq!(p.evaluate(&ratio(1, 2)), rat(2));
    }

    #[test]
    fn divrem_cases() {
        let k3 = PolynomialQ::from_ints(&[0, 0, 0, 1]);
        let k2 = PolynomialQ::from_ints(&[0, 0, 1]);
        let (q, r) = k3.divrem(&k2).unwrap();
        assert_eq!(q, PolynomialQ::x());
        assert!(r.is_zero());
        assert!(matches!(
            k3.divrem(&PolynomialQ::zero()),
            Err(Error::DivisionByZero(_))
        ));
        let (q, r) = k2.divrem(&k3).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, k2);
    }

    #[test]
    fn evenness() {
        assert!(PolynomialQ::from_ints(&[1, 0, 4]).is_even());
        assert!(!PolynomialQ::x().is_even());
        assert!(PolynomialQ::zero().is_even());
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = PolynomialQ::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(PolynomialQ::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn rational_roots_of_half_integer_denominator() {
        // (k - 1/2)(k + 1/2)(k - 3/2) k
        let p = [ratio(1, 2), ratio(-1, 2), ratio(3, 2), rat(0)]
            .iter()
            .fold(PolynomialQ::one(), |acc, r| {
                &acc * &PolynomialQ::linear(rat(1), -r.clone())
            });
        let mut roots = p.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![ratio(-1, 2), rat(0), ratio(1, 2), ratio(3, 2)]);
    }

    #[test]
    fn renders() {
        assert_eq!(PolynomialQ::from_ints(&[0, 2, 4]).render("k"), "4k^2 + 2k");
        assert_eq!(PolynomialQ::zero().render("k"), "0");
        let p = PolynomialQ::new(vec![ratio(-1, 4), rat(0), ratio(1, 2)]);
        assert_eq!(p.render("k"), "(1/2)k^2 - 1/4");
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=9).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_poly() -> impl Strategy<Value = PolynomialQ> {
        prop::collection::vec(small_rational(), 0..6).prop_map(PolynomialQ::new)
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(
            p in small_poly(), q in small_poly(), x in small_rational()
        ) {
            prop_assert_eq!((&p + &q).evaluate(&x), p.evaluate(&x) + q.evaluate(&x));
            prop_assert_eq!((&p * &q).evaluate(&x), p.evaluate(&x) * q.evaluate(&x));
            prop_assert_eq!((&p - &q).evaluate(&x), p.evaluate(&x) - q.evaluate(&x));
        }

        #[test]
        fn divrem_reconstructs(p in small_poly(), q in small_poly()) {
            prop_assume!(!q.is_zero());
            let (quot, rem) = p.divrem(&q).unwrap();
            prop_assert_eq!(&(&q * &quot) + &rem, p);
            prop_assert!(rem.degree().is_none_or(|d| d < q.degree().unwrap()));
        }

        #[test]
        fn gcd_divides_both(p in small_poly(), q in small_poly(), r in small_poly()) {
            let a = &p * &r;
            let b = &q * &r;
            let g = a.gcd(&b);
            if !g.is_zero() {
                prop_assert!(a.divrem(&g).unwrap().1.is_zero());
                prop_assert!(b.divrem(&g).unwrap().1.is_zero());
                prop_assert!(g.leading_coeff().unwrap().is_one());
                if !r.is_zero() {
                    prop_assert!(g.divrem(&r.monic()).unwrap().1.is_zero());
                }
            }
        }
    }
}
