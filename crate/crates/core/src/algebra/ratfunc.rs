use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::PolynomialQ;
use crate::error::{Error, Result};

/// Reduced quotient of polynomials over ℚ.
///
/// Canonical form: `gcd(num, den) = 1`, `den` monic, zero stored as `0/1`.
/// Equal functions therefore have equal fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunctionQ {
    num: PolynomialQ,
    den: PolynomialQ,
}

impl RationalFunctionQ {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: PolynomialQ, den: PolynomialQ) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(
                "rational function with zero denominator".into(),
            ));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g)?;
        let (den, _) = den.divrem(&g)?;
        let lc = den.leading_coeff().expect("nonzero").recip();
        Ok(Self {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn zero() -> Self {
        Self {
            num: PolynomialQ::zero(),
            den: PolynomialQ::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(PolynomialQ::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(PolynomialQ::constant(c))
    }

    pub fn from_poly(p: PolynomialQ) -> Self {
        Self {
            num: p,
            den: PolynomialQ::one(),
        }
    }

    pub fn num(&self) -> &PolynomialQ {
        &self.num
    }

    pub fn den(&self) -> &PolynomialQ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.evaluate(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero(format!(
                "rational function has a pole at {x}"
            )));
        }
        Ok(self.num.evaluate(x) / d)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// True when both numerator and denominator are even polynomials, i.e.
    /// the function is invariant under `x ↦ −x`.
    pub fn is_even(&self) -> bool {
        self.num.is_even() && self.den.is_even()
    }

    /// Value as `x → ∞`: `None` when it diverges.
    pub fn limit_at_infinity(&self) -> Option<BigRational> {
        let dn = match self.num.degree() {
            None => return Some(BigRational::zero()),
            Some(d) => d,
        };
        let dd = self.den.degree().expect("den is nonzero");
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => Some(BigRational::zero()),
            std::cmp::Ordering::Equal => Some(
                self.num.leading_coeff().expect("nonzero")
                    / self.den.leading_coeff().expect("nonzero"),
            ),
            std::cmp::Ordering::Greater => None,
        }
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            return self.num.render(var);
        }
        format!("({}) / ({})", self.num.render(var), self.den.render(var))
    }

    fn combine(&self, rhs: &Self, sign: bool) -> Self {
        let a = &self.num * &rhs.den;
        let b = &rhs.num * &self.den;
        let num = if sign { &a + &b } else { &a - &b };
        Self::new(num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl fmt::Debug for RationalFunctionQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunctionQ({})", self.render("x"))
    }
}

impl fmt::Display for RationalFunctionQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &RationalFunctionQ {
    type Output = RationalFunctionQ;

    fn add(self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        self.combine(rhs, true)
    }
}

impl Sub for &RationalFunctionQ {
    type Output = RationalFunctionQ;

    fn sub(self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        self.combine(rhs, false)
    }
}

impl Mul for &RationalFunctionQ {
    type Output = RationalFunctionQ;

    fn mul(self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        RationalFunctionQ::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Neg for &RationalFunctionQ {
    type Output = RationalFunctionQ;

    fn neg(self) -> RationalFunctionQ {
        RationalFunctionQ {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl std::iter::Sum for RationalFunctionQ {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| &acc + &x)
    }
}
