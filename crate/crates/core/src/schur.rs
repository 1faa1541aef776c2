//! Exact Schur and shifted Schur evaluations at the points the moment formulas
//! need, and an executable form of the Okounkov–Olshanski binomial expansion
//! for rectangular shapes.
//!
//! Schur functions are evaluated through the Jacobi–Trudi determinant
//! `s_λ = det[h_{λ_i − i + j}]`, with the complete homogeneous values `h_r`
//! generated by the recurrence `h_r(x₁..x_m) = h_r(x₁..x_{m−1}) + x_m·h_{r−1}(x₁..x_m)`.
//! Nothing divides by differences of arguments, so repeated points are fine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{binomial, determinant, rat};
use crate::error::{Error, Result};
use crate::partition::{partitions_in_rectangle, Partition};
use crate::pochhammer::{falling, poch_up};

/// Arguments `x₁, …, x_n` of a symmetric function; further variables are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationPoint {
    values: Vec<BigRational>,
}

impl SpecializationPoint {
    pub fn new(values: Vec<BigRational>) -> Self {
        Self { values }
    }

    /// `n` copies of `a`, written `{a}^n`.
    pub fn repeated(a: BigRational, n: usize) -> Self {
        Self { values: vec![a; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self::repeated(BigRational::one(), n)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every coordinate shifted by `delta`.
    pub fn shifted(&self, delta: &BigRational) -> Self {
        Self {
            values: self.values.iter().map(|v| v + delta).collect(),
        }
    }
}

impl From<Vec<BigRational>> for SpecializationPoint {
    fn from(values: Vec<BigRational>) -> Self {
        Self::new(values)
    }
}

/// Complete homogeneous symmetric values `h_0, …, h_max` at `pt`.
pub fn complete_homogeneous(pt: &SpecializationPoint, max: usize) -> Vec<BigRational> {
    let mut h = vec![BigRational::zero(); max + 1];
    h[0] = BigRational::one();
    for x in pt.values() {
        for r in 1..=max {
            let prev = &h[r - 1] * x;
            h[r] += prev;
        }
    }
    h
}

/// `s_λ(1^k)` by the hook-content formula `(k↑λ)/h_λ`.
pub fn schur_eval_ones(lambda: &Partition, k: usize) -> BigRational {
    let num = poch_up(&rat(k as i64), lambda);
    num / BigRational::from_integer(BigInt::from(lambda.hook_number()))
}

/// `s_λ(pt)` via Jacobi–Trudi.
pub fn schur_eval(lambda: &Partition, pt: &SpecializationPoint) -> Result<BigRational> {
    let l = lambda.length();
    if pt.len() < l {
        return Err(Error::Dimension(format!(
            "evaluation point has {} coordinates but {lambda} has {l} rows",
            pt.len()
        )));
    }
    if l == 0 {
        return Ok(BigRational::one());
    }
    let max = lambda.part(0) + l - 1;
    let h = complete_homogeneous(pt, max);
    let entry = |r: i64| {
        if r < 0 {
            BigRational::zero()
        } else {
            h[r as usize].clone()
        }
    };
    let matrix = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| entry(lambda.part(i) as i64 - i as i64 + j as i64))
                .collect()
        })
        .collect();
    Ok(determinant(matrix))
}

/// `h*_r` at the rectangle with `k` rows of length `N`:
/// `(N↓r)·h_r(1^k)`, zero for negative `r`.
pub fn h_star_rect(r: i64, k: usize, n: usize) -> BigRational {
    if r < 0 {
        return BigRational::zero();
    }
    if r == 0 {
        return BigRational::one();
    }
    // h_r(1^k) counts degree-r monomials in k variables.
    let h = if k == 0 {
        BigRational::zero()
    } else {
        BigRational::from_integer(binomial(k + r as usize - 1, r as usize).into())
    };
    falling(&rat(n as i64), r).expect("nonnegative length") * h
}

// det[h*_{μ_i − i + j}(k, N + j − 1)] of size R.
fn shifted_schur_determinant(mu: &Partition, k: usize, n: usize, size: usize) -> BigRational {
    let matrix = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let r = mu.part(i) as i64 - i as i64 + j as i64;
                    h_star_rect(r, k, n + j)
                })
                .collect()
        })
        .collect();
    determinant(matrix)
}

/// Shifted Schur function `s*_μ` at the rectangle ⟨N^k⟩ (`k` rows of
/// length `N`, the shape whose Schur function gives the zeroth moment).
/// It vanishes unless `μ` fits inside that rectangle.
///
/// Three routes are computed and required to agree:
/// `h_μ·s_{μᵗ}(1^N)·s_μ(1^k)`, `(−1)^{|μ|}((−N)↑μ)(k↑μ)/h_μ`, and the
/// determinant of `h*` values of size `l(μ)`.
pub fn shifted_schur_rect(mu: &Partition, k: usize, n: usize) -> Result<BigRational> {
    let hook = BigRational::from_integer(BigInt::from(mu.hook_number()));
    let via_schur = &hook * schur_eval_ones(&mu.conjugate(), n) * schur_eval_ones(mu, k);
    let sign = if mu.size().is_multiple_of(2) {
        rat(1)
    } else {
        rat(-1)
    };
    let via_contents = sign * poch_up(&rat(-(n as i64)), mu) * poch_up(&rat(k as i64), mu) / &hook;
    let size = mu.length();
    let via_determinant = shifted_schur_determinant(mu, k, n, size);
    debug_assert_eq!(
        via_determinant,
        shifted_schur_determinant(mu, k, n, size + 1),
        "determinant not stable in its size for {mu}"
    );
    if via_schur != via_contents || via_schur != via_determinant {
        return Err(Error::Inconsistency(format!(
            "shifted Schur {mu} at {{{k}}}^{n}: {via_schur} / {via_contents} / {via_determinant}"
        )));
    }
    Ok(via_schur)
}

/// Outcome of comparing both sides of the binomial expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialCheck {
    pub holds: bool,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// `lhs − rhs`.
    pub residual: BigRational,
}

/// Checks `s_λ(1+x)/s_λ(1^n) = Σ_μ s*_μ(λ)·s_μ(x)/(n↑μ)` for `λ = ⟨k^N⟩`
/// (N rows of length k) at the point `x` of length `n ≥ N`.
pub fn binomial_check(
    k: usize,
    n_rows: usize,
    n: usize,
    x: &SpecializationPoint,
) -> Result<BinomialCheck> {
    if k == 0 || n_rows == 0 {
        return Err(Error::Domain("binomial check needs k, N ≥ 1".into()));
    }
    if n < n_rows {
        return Err(Error::Dimension(format!(
            "binomial check needs n ≥ N, got n = {n}, N = {n_rows}"
        )));
    }
    if x.len() != n {
        return Err(Error::Dimension(format!(
            "evaluation point has {} coordinates, expected n = {n}",
            x.len()
        )));
    }
    let lambda = Partition::rectangle(n_rows, k);
    // λ has N rows of length k, so its shifted Schur values use (rows, length) = (N, k).
    let lhs = schur_eval(&lambda, &x.shifted(&BigRational::one()))? / schur_eval_ones(&lambda, n);

    let mut rhs = BigRational::zero();
    // s*_μ(λ) vanishes unless μ ⊆ λ.
    for mu in partitions_in_rectangle(n_rows, k) {
        let s_star = shifted_schur_rect(&mu, n_rows, k)?;
        if s_star.is_zero() {
            continue;
        }
        let s_x = schur_eval(&mu, x)?;
        rhs += s_star * s_x / poch_up(&rat(n as i64), &mu);
    }
    let residual = &lhs - &rhs;
    Ok(BinomialCheck {
        holds: residual.is_zero(),
        lhs,
        rhs,
        residual,
    })
}

/// Fixed rational points used by the binomial-expansion suites.
pub fn reference_points(n: usize) -> Vec<SpecializationPoint> {
    let seeds: [&[(i64, i64)]; 10] = [
        &[(0, 1)],
        &[(1, 2), (1, 3)],
        &[(1, 1), (1, 2), (0, 1)],
        &[(-1, 2), (2, 3), (1, 5)],
        &[(3, 1), (-2, 1), (1, 7)],
        &[(1, 4), (1, 4), (1, 4), (1, 4)],
        &[(-3, 5), (5, 3), (0, 1), (2, 1)],
        &[(7, 2), (-1, 3), (1, 9), (-4, 7)],
        &[(2, 1), (2, 1), (-1, 1)],
        &[(-5, 6), (1, 8), (3, 4), (-2, 9)],
    ];
    seeds
        .iter()
        .map(|s| {
            let values = (0..n)
                .map(|i| {
                    let (a, b) = s[i % s.len()];
                    // vary repeated coordinates so long points are not periodic
                    BigRational::new(BigInt::from(a + (i / s.len()) as i64), BigInt::from(b))
                })
                .collect();
            SpecializationPoint::new(values)
        })
        .collect()
}
