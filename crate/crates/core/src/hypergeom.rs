//! Hypergeometric functions of a matrix argument, restricted to scalar
//! matrices `z·Id_N`:
//!
//! ```text
//! pFq(a; b; z·Id_N) = Σ_λ (Π_i a_i↑λ / Π_j b_j↑λ) · s_λ(z·Id_N) / h_λ,
//! s_λ(z·Id_N) = z^{|λ|} · (N↑λ) / h_λ.
//! ```
//!
//! The series is truncated at a total degree. A term whose upper product
//! vanishes is zero and its lower product is not inspected, which is what makes
//! `₁F₁(−k; −2k; ·)` a terminating series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{factorial, rat};
use crate::error::{Error, Result};
use crate::moments::m_ratio_finite;
use crate::partition::{partitions, Partition};
use crate::pochhammer::poch_up;

/// Parameters of a truncated `pFq` at `z·Id_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperParams {
    pub upper: Vec<BigRational>,
    pub lower: Vec<BigRational>,
    /// Matrix size.
    pub n: usize,
    pub z: BigRational,
    pub max_degree: usize,
}

/// Eigenvalue data of the matrix argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixArgument {
    /// `z·Id_N`.
    Scalar { z: BigRational, n: usize },
    /// A general diagonalizable matrix given by its eigenvalues.
    Eigenvalues(Vec<BigRational>),
}

impl MatrixArgument {
    fn as_scalar(&self) -> Result<(BigRational, usize)> {
        match self {
            MatrixArgument::Scalar { z, n } => Ok((z.clone(), *n)),
            MatrixArgument::Eigenvalues(vals) => match vals.split_first() {
                Some((first, rest)) if rest.iter().all(|v| v == first) => {
                    Ok((first.clone(), vals.len()))
                }
                _ => Err(Error::Unsupported(
                    "hypergeometric functions are only evaluated at scalar matrices".into(),
                )),
            },
        }
    }
}

fn term(params: &HyperParams, lambda: &Partition) -> Result<BigRational> {
    if lambda.length() > params.n {
        return Ok(BigRational::zero());
    }
    let upper = params
        .upper
        .iter()
        .fold(BigRational::one(), |acc, a| acc * poch_up(a, lambda));
    if upper.is_zero() {
        return Ok(upper);
    }
    let lower = params
        .lower
        .iter()
        .fold(BigRational::one(), |acc, b| acc * poch_up(b, lambda));
    if lower.is_zero() {
        return Err(Error::Pole(lambda.to_string()));
    }
    let hook = BigRational::from_integer(BigInt::from(lambda.hook_number()));
    Ok(upper / lower * poch_up(&rat(params.n as i64), lambda) / (&hook * &hook))
}

/// Coefficient of `z^r` for `r = 0..=max_degree` (the value of `z` is ignored).
pub fn hyper_layers(params: &HyperParams) -> Result<Vec<BigRational>> {
    if params.n == 0 {
        return Err(Error::Domain("matrix size N must be positive".into()));
    }
    (0..=params.max_degree)
        .map(|r| {
            partitions(r)?.try_fold(BigRational::zero(), |acc, lambda| {
                Ok(acc + term(params, &lambda)?)
            })
        })
        .collect()
}

/// Truncated `pFq(a; b; z·Id_N)`.
pub fn hyper_pfq_scalar(params: &HyperParams) -> Result<BigRational> {
    let layers = hyper_layers(params)?;
    let mut power = BigRational::one();
    let mut total = BigRational::zero();
    for layer in layers {
        total += &layer * &power;
        power *= &params.z;
    }
    Ok(total)
}

/// Entry point taking an arbitrary matrix argument; anything other than a
/// scalar matrix is rejected.
pub fn hyper_pfq(
    upper: &[BigRational],
    lower: &[BigRational],
    arg: &MatrixArgument,
    max_degree: usize,
) -> Result<BigRational> {
    let (z, n) = arg.as_scalar()?;
    hyper_pfq_scalar(&HyperParams {
        upper: upper.to_vec(),
        lower: lower.to_vec(),
        n,
        z,
        max_degree,
    })
}

/// Parameters of `₁F₁(−k; −2k; z·Id_N)`.
pub fn confluent_params(k: usize, n: usize, max_degree: usize) -> HyperParams {
    HyperParams {
        upper: vec![rat(-(k as i64))],
        lower: vec![rat(-2 * k as i64)],
        n,
        z: BigRational::zero(),
        max_degree,
    }
}

/// Per-degree comparison of the moment generating series with `₁F₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgfCheck {
    pub holds: bool,
    /// `m_r/r!` minus the degree-r layer of `₁F₁`, for `r = 0..=r_max`.
    pub residuals: Vec<BigRational>,
}

/// Compares `Σ_r m_r z^r/r!` with `₁F₁(−k; −2k; z·Id_N)` coefficient-wise,
/// where `m_r` is the i-normalized finite-N moment ratio.
pub fn egf_check(k: usize, n: usize, r_max: usize) -> Result<EgfCheck> {
    if r_max > 2 * k {
        return Err(Error::Domain(format!(
            "requires r_max <= 2k (got r_max = {r_max}, k = {k})"
        )));
    }
    let layers = hyper_layers(&confluent_params(k, n, r_max))?;
    let residuals = layers
        .iter()
        .enumerate()
        .map(|(r, layer)| {
            let coeff =
                m_ratio_finite(k, r, n)? / BigRational::from_integer(BigInt::from(factorial(r)));
            Ok(coeff - layer)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EgfCheck {
        holds: residuals.iter().all(|r| r.is_zero()),
        residuals,
    })
}
