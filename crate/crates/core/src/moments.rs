//! Moments of `|Z_U(0)|^{2k}` weighted by powers of the logarithmic derivative,
//! for `U` Haar-distributed on the unitary group `U(N)`.
//!
//! Notation: `M_N(2k, r) = E[|Z|^{2k}(Z'/Z)^r]` and `V_N(2k, 2h) =
//! E[|V|^{2k}|V'/V|^{2h}]`, all at `θ = 0`. The raw `M_N(2k, r)` is `𝔦^{−r}`
//! times a real number, so every M-ratio here is stored *i-normalized*:
//!
//! ```text
//! m_r = 𝔦^r · M_N(2k, r) / M_N(2k, 0)
//!     = Σ_{μ ⊢ r} (r!/h_μ²) · (N↑μ)((−k)↑μ) / ((−2k)↑μ)        (finite N)
//!     → Σ_{μ ⊢ r} (r!/h_μ²) · (k↑μ) / ((2k)↑μ)                (after dividing by N^r)
//! ```
//!
//! # V-moments
//!
//! Since `V'/V = 𝔦N/2 + Z'/Z` is real at real `θ`,
//! `|V'/V|^{2h} = (𝔦N/2 + Z'/Z)^{2h}` and the binomial theorem gives
//! `V_N(2k,2h) = Σ_i C(2h,i)·M_N(2k,i)·(𝔦N/2)^{2h−i}`.
//! Substituting `M_N(2k,i) = M_N(2k,0)·m_i·𝔦^{−i}` collects the unit powers
//! into `𝔦^{2h−2i} = (−1)^{h−i}`:
//!
//! ```text
//! V_N(2k,2h) = M_N(2k,0) · Σ_{i=0}^{2h} C(2h,i) · (−1)^{h−i} · (N/2)^{2h−i} · m_i
//! ```
//!
//! Dividing by `N^{k²+2h}` and letting `N → ∞` replaces `(N/2)^{2h−i}·m_i` by
//! `2^{i−2h}·m_i^∞`, which yields the limiting ratio `V(2k,2h)/V(2k,0)` as a
//! rational function of `k`. The code carries the unit power explicitly and
//! fails with [`Error::Inconsistency`] if an imaginary part survives.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{barnes_g, binomial, factorial, rat, PolynomialQ, RationalFunctionQ};
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::pochhammer::{poch_poly, poch_up};
use crate::schur::schur_eval_ones;

/// Which quantity a [`MomentRecord`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentKind {
    MRatioFinite,
    MRatioLimit,
    MZeroFinite,
    MZeroLimit,
    VFinite,
    VRatioLimit,
}

impl MomentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MomentKind::MRatioFinite => "m_ratio_finite",
            MomentKind::MRatioLimit => "m_ratio_limit",
            MomentKind::MZeroFinite => "m_zero_finite",
            MomentKind::MZeroLimit => "m_zero_limit",
            MomentKind::VFinite => "v_finite",
            MomentKind::VRatioLimit => "v_ratio_limit",
        }
    }

    fn is_m_ratio(&self) -> bool {
        matches!(self, MomentKind::MRatioFinite | MomentKind::MRatioLimit)
    }
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One computed moment with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentRecord {
    pub kind: MomentKind,
    pub k: usize,
    /// `r` for M kinds, the even exponent `2h` for V kinds, 0 for zeroth moments.
    pub order: usize,
    pub n: Option<usize>,
    pub value: BigRational,
}

impl MomentRecord {
    /// Computes `kind` at the given parameters. `order` is `r` for M-ratios
    /// and `2h` for V kinds.
    pub fn compute(kind: MomentKind, k: usize, order: usize, n: Option<usize>) -> Result<Self> {
        let need_n = || n.ok_or_else(|| Error::Domain(format!("{kind} requires N")));
        let even_half = || {
            if order % 2 == 1 {
                Err(Error::Domain(format!(
                    "{kind} needs an even exponent, got {order}"
                )))
            } else {
                Ok(order / 2)
            }
        };
        let value = match kind {
            MomentKind::MRatioFinite => m_ratio_finite(k, order, need_n()?)?,
            MomentKind::MRatioLimit => m_ratio_limit(k, order)?,
            MomentKind::MZeroFinite => moment_zero_finite(k, need_n()?)?,
            MomentKind::MZeroLimit => moment_zero_limit(k)?,
            MomentKind::VFinite => v_moment_finite(k, even_half()?, need_n()?)?,
            MomentKind::VRatioLimit => {
                let h = even_half()?;
                check_v_domain(k, h)?;
                v_ratio_limit_ratfunc(h)?.evaluate(&rat(k as i64))?
            }
        };
        let n = match kind {
            MomentKind::MRatioFinite | MomentKind::MZeroFinite | MomentKind::VFinite => n,
            _ => None,
        };
        Ok(Self {
            kind,
            k,
            order,
            n,
            value,
        })
    }

    /// "i-normalized" for M-ratios, "exact" otherwise.
    pub fn convention(&self) -> &'static str {
        if self.kind.is_m_ratio() {
            "i-normalized"
        } else {
            "exact"
        }
    }

    /// Exponent `e` with raw value `= 𝔦^{−e}·value·M(·,0)`; only meaningful for
    /// M-ratios (reported mod 4).
    pub fn i_power(&self) -> usize {
        if self.kind.is_m_ratio() {
            self.order % 4
        } else {
            0
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("requires k >= 1".into()));
    }
    Ok(())
}

/// Rejects `k = 0` and `r > 2k`.
pub fn check_m_domain(k: usize, r: usize) -> Result<()> {
    check_k(k)?;
    if r > 2 * k {
        return Err(Error::Domain(format!(
            "requires r <= 2k (got r = {r}, k = {k})"
        )));
    }
    Ok(())
}

/// Rejects `k = 0` and `h > k`.
pub fn check_v_domain(k: usize, h: usize) -> Result<()> {
    check_k(k)?;
    if h > k {
        return Err(Error::Domain(format!(
            "requires h <= k (got h = {h}, k = {k})"
        )));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("requires N >= 1".into()));
    }
    Ok(())
}

fn big(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

// r!/h_μ² as an exact rational.
fn plancherel_coefficient(mu: &Partition) -> BigRational {
    mu.plancherel_weight()
}

fn sum_over_partitions<F>(r: usize, term: F) -> Result<BigRational>
where
    F: Fn(&Partition) -> BigRational + Sync,
{
    let all: Vec<Partition> = partitions(r)?.collect();
    Ok(all
        .par_iter()
        .map(&term)
        .reduce(BigRational::zero, |a, b| a + b))
}

/// `𝔦^r·M_N(2k,r)/M_N(2k,0)` for `0 ≤ r ≤ 2k`.
pub fn m_ratio_finite(k: usize, r: usize, n: usize) -> Result<BigRational> {
    check_m_domain(k, r)?;
    check_n(n)?;
    let (kk, nn) = (rat(k as i64), rat(n as i64));
    let two_k = rat(2 * k as i64);
    sum_over_partitions(r, |mu| {
        plancherel_coefficient(mu) * poch_up(&nn, mu) * poch_up(&-&kk, mu) / poch_up(&-&two_k, mu)
    })
}

/// Limit of the i-normalized ratio after dividing by `N^r`.
pub fn m_ratio_limit(k: usize, r: usize) -> Result<BigRational> {
    check_m_domain(k, r)?;
    let (kk, two_k) = (rat(k as i64), rat(2 * k as i64));
    sum_over_partitions(r, |mu| {
        plancherel_coefficient(mu) * poch_up(&kk, mu) / poch_up(&two_k, mu)
    })
}

/// The limiting i-normalized ratio as a reduced rational function of `k`,
/// built from the symbolic Pochhammer products.
pub fn m_ratio_limit_ratfunc(r: usize) -> Result<RationalFunctionQ> {
    let all: Vec<Partition> = partitions(r)?.collect();
    Ok(all
        .par_iter()
        .map(|mu| {
            RationalFunctionQ::new(
                poch_poly(1, mu).scale(&plancherel_coefficient(mu)),
                poch_poly(2, mu),
            )
            .expect("Pochhammer polynomial is nonzero")
        })
        .reduce(RationalFunctionQ::zero, |a, b| &a + &b))
}

/// The finite-N i-normalized ratio as a polynomial in `N`.
pub fn m_ratio_finite_poly_n(k: usize, r: usize) -> Result<PolynomialQ> {
    check_m_domain(k, r)?;
    let kk = rat(k as i64);
    let two_k = rat(2 * k as i64);
    let all: Vec<Partition> = partitions(r)?.collect();
    Ok(all
        .par_iter()
        .map(|mu| {
            let c = plancherel_coefficient(mu) * poch_up(&-&kk, mu) / poch_up(&-&two_k, mu);
            poch_poly(1, mu).scale(&c)
        })
        .reduce(PolynomialQ::zero, |a, b| &a + &b))
}

/// `M_N(2k, 0) = s_{⟨N^k⟩}(1^{2k})`, checked against the Barnes G product.
pub fn moment_zero_finite(k: usize, n: usize) -> Result<BigRational> {
    check_k(k)?;
    check_n(n)?;
    let via_hook_content = schur_eval_ones(&Partition::rectangle(k, n), 2 * k);
    let (k, n) = (k as i64, n as i64);
    let g = |x: i64| barnes_g(x).map(big);
    let via_barnes =
        g(n + 2 * k + 1)? * g(n + 1)? * g(k + 1)?.pow(2) / (g(n + k + 1)?.pow(2) * g(2 * k + 1)?);
    if via_hook_content != via_barnes {
        return Err(Error::Inconsistency(format!(
            "zeroth moment k={k} N={n}: hook-content {via_hook_content} vs Barnes G {via_barnes}"
        )));
    }
    Ok(via_hook_content)
}

/// `lim M_N(2k,0)/N^{k²} = G(k+1)²/G(2k+1)`.
pub fn moment_zero_limit(k: usize) -> Result<BigRational> {
    check_k(k)?;
    let k = k as i64;
    Ok(big(barnes_g(k + 1)?).pow(2) / big(barnes_g(2 * k + 1)?))
}

// Gaussian rational accumulator for the unit-power bookkeeping.
#[derive(Default)]
struct GaussianSum {
    re: BigRational,
    im: BigRational,
}

impl GaussianSum {
    // Adds 𝔦^power · value.
    fn add_unit_multiple(&mut self, power: i64, value: BigRational) {
        match power.rem_euclid(4) {
            0 => self.re += value,
            1 => self.im += value,
            2 => self.re -= value,
            _ => self.im -= value,
        }
    }
}

/// `V_N(2k, 2h) = E[|V(0)|^{2k}|V'(0)/V(0)|^{2h}]` for `h ≤ k`.
pub fn v_moment_finite(k: usize, h: usize, n: usize) -> Result<BigRational> {
    check_v_domain(k, h)?;
    check_n(n)?;
    let zeroth = moment_zero_finite(k, n)?;
    let half_n = BigRational::new(BigInt::from(n), BigInt::from(2));
    let mut acc = GaussianSum::default();
    for i in 0..=2 * h {
        let m_i = m_ratio_finite(k, i, n)?;
        // M_N(2k,i) = 𝔦^{-i}·M_0·m_i and (𝔦N/2)^{2h-i} = 𝔦^{2h-i}(N/2)^{2h-i}
        let power = -(i as i64) + (2 * h - i) as i64;
        let magnitude = big(binomial(2 * h, i)) * half_n.pow((2 * h - i) as i32) * m_i;
        acc.add_unit_multiple(power, magnitude);
    }
    if !acc.im.is_zero() {
        return Err(Error::Inconsistency(format!(
            "V-moment k={k} h={h} N={n} has imaginary part {}",
            acc.im
        )));
    }
    let value = zeroth * acc.re;
    if value.is_negative() {
        return Err(Error::Inconsistency(format!(
            "V-moment k={k} h={h} N={n} is negative: {value}"
        )));
    }
    Ok(value)
}

/// `V(2k,2h)/V(2k,0)` as a reduced rational function of `k`.
pub fn v_ratio_limit_ratfunc(h: usize) -> Result<RationalFunctionQ> {
    let mut total = RationalFunctionQ::zero();
    for i in 0..=2 * h {
        let sign = if (h + i).is_multiple_of(2) {
            rat(1)
        } else {
            rat(-1)
        };
        let weight = sign * big(binomial(2 * h, i)) / big(BigInt::from(2).pow((2 * h - i) as u32));
        total = &total + &m_ratio_limit_ratfunc(i)?.scale(&weight);
    }
    Ok(total)
}

/// Closed form of the leading coefficient ratio `(2h)!/(h!·2^{3h})`.
pub fn v_ratio_leading_constant(h: usize) -> BigRational {
    BigRational::new(
        factorial(2 * h).into(),
        (factorial(h) * num_bigint::BigUint::from(8u32).pow(h as u32)).into(),
    )
}

/// `(2k)^{2h}·V(2k,2h)/V(2k,0)` in the limit `k → ∞`.
pub fn v_ratio_scaled_limit(h: usize) -> Result<Option<BigRational>> {
    let f = v_ratio_limit_ratfunc(h)?;
    let two_k = PolynomialQ::linear(rat(2), rat(0));
    let power = (0..2 * h).fold(PolynomialQ::one(), |acc, _| &acc * &two_k);
    let scaled = &f * &RationalFunctionQ::from_poly(power);
    Ok(scaled.limit_at_infinity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn finite_small_cases() {
        for k in 1..=4 {
            for n in 1..=5 {
                assert_eq!(m_ratio_finite(k, 0, n).unwrap(), rat(1));
                assert_eq!(m_ratio_finite(k, 1, n).unwrap(), ratio(n as i64, 2));
            }
        }
        assert_eq!(m_ratio_finite(1, 2, 2).unwrap(), ratio(1, 3));
    }

    #[test]
    fn limit_small_cases() {
        assert_eq!(m_ratio_limit(3, 0).unwrap(), rat(1));
        assert_eq!(m_ratio_limit(3, 1).unwrap(), ratio(1, 2));
        assert_eq!(m_ratio_limit(1, 2).unwrap(), ratio(1, 6));
        assert_eq!(m_ratio_limit(2, 2).unwrap(), ratio(7, 30));
        for k in 1..=6i64 {
            let expected = ratio(2 * k * k - 1, 2 * (4 * k * k - 1));
            assert_eq!(m_ratio_limit(k as usize, 2).unwrap(), expected);
        }
    }

    #[test]
    fn domain_guards() {
        assert!(matches!(m_ratio_finite(1, 3, 2), Err(Error::Domain(_))));
        assert!(matches!(m_ratio_limit(2, 5), Err(Error::Domain(_))));
        assert!(matches!(m_ratio_finite_poly_n(1, 3), Err(Error::Domain(_))));
        assert!(matches!(m_ratio_finite(0, 0, 2), Err(Error::Domain(_))));
        assert!(matches!(m_ratio_finite(1, 1, 0), Err(Error::Domain(_))));
        assert!(matches!(v_moment_finite(1, 2, 3), Err(Error::Domain(_))));
        assert!(matches!(moment_zero_limit(0), Err(Error::Domain(_))));
        let msg = m_ratio_finite(1, 3, 2).unwrap_err().to_string();
        assert!(msg.contains("requires r <= 2k"), "{msg}");
    }

    #[test]
    fn ratfunc_small_cases() {
        assert_eq!(m_ratio_limit_ratfunc(0).unwrap(), RationalFunctionQ::one());
        assert_eq!(
            m_ratio_limit_ratfunc(1).unwrap(),
            RationalFunctionQ::constant(ratio(1, 2))
        );
        let r2 = m_ratio_limit_ratfunc(2).unwrap();
        let expected = RationalFunctionQ::new(
            PolynomialQ::from_ints(&[-1, 0, 2]),
            PolynomialQ::from_ints(&[-2, 0, 8]),
        )
        .unwrap();
        assert_eq!(r2, expected);
        assert_eq!(r2.evaluate(&rat(1)).unwrap(), ratio(1, 6));
        assert_eq!(r2.evaluate(&rat(2)).unwrap(), ratio(7, 30));
    }

    #[test]
    fn ratfunc_matches_scalar_limit() {
        for r in 0..=8 {
            let f = m_ratio_limit_ratfunc(r).unwrap();
            for k in (r.div_ceil(2).max(1))..=8 {
                assert_eq!(
                    f.evaluate(&rat(k as i64)).unwrap(),
                    m_ratio_limit(k, r).unwrap(),
                    "r={r} k={k}"
                );
            }
        }
    }

    #[test]
    fn poly_in_n_cases() {
        assert_eq!(m_ratio_finite_poly_n(3, 0).unwrap(), PolynomialQ::one());
        assert_eq!(
            m_ratio_finite_poly_n(2, 1).unwrap(),
            PolynomialQ::new(vec![rat(0), ratio(1, 2)])
        );
        let p = m_ratio_finite_poly_n(1, 2).unwrap();
        assert_eq!(p.evaluate(&rat(2)), ratio(1, 3));
        assert_eq!(p.leading_coeff().unwrap(), &ratio(1, 6));
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn poly_in_n_consistency() {
        for k in 1..=4 {
            for r in 1..=2 * k {
                let p = m_ratio_finite_poly_n(k, r).unwrap();
                assert_eq!(p.degree(), Some(r));
                assert_eq!(p.leading_coeff().unwrap(), &m_ratio_limit(k, r).unwrap());
                for n in 1..=12 {
                    assert_eq!(
                        p.evaluate(&rat(n)),
                        m_ratio_finite(k, r, n as usize).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn zeroth_moments() {
        assert_eq!(moment_zero_finite(1, 2).unwrap(), rat(3));
        assert_eq!(moment_zero_finite(2, 2).unwrap(), rat(20));
        assert_eq!(moment_zero_finite(1, 1).unwrap(), rat(2));
        // s_(N)(1,1) = N + 1
        for n in 1..=10 {
            assert_eq!(moment_zero_finite(1, n).unwrap(), rat(n as i64 + 1));
        }
        assert_eq!(moment_zero_limit(1).unwrap(), rat(1));
        assert_eq!(moment_zero_limit(2).unwrap(), ratio(1, 12));
        assert_eq!(moment_zero_limit(3).unwrap(), ratio(1, 8640));
        for k in 1..=8 {
            for n in 1..=8 {
                assert!(moment_zero_finite(k, n).unwrap().is_integer());
            }
        }
    }

    #[test]
    fn v_moments() {
        for k in 1..=3 {
            for n in 1..=4 {
                assert_eq!(
                    v_moment_finite(k, 0, n).unwrap(),
                    moment_zero_finite(k, n).unwrap()
                );
            }
        }
        assert_eq!(v_moment_finite(1, 1, 2).unwrap(), rat(2));
        assert!(!v_moment_finite(2, 1, 1).unwrap().is_negative());
    }

    #[test]
    fn v_ratfunc_cases() {
        assert_eq!(v_ratio_limit_ratfunc(0).unwrap(), RationalFunctionQ::one());
        let v1 = v_ratio_limit_ratfunc(1).unwrap();
        let expected =
            RationalFunctionQ::new(PolynomialQ::one(), PolynomialQ::from_ints(&[-4, 0, 16]))
                .unwrap();
        assert_eq!(v1, expected);
        assert_eq!(v1.evaluate(&rat(1)).unwrap(), ratio(1, 12));
    }

    #[test]
    fn v_ratfunc_is_limit_of_finite_v() {
        // V_N/N^{k²+2h} ÷ M_N(2k,0)/N^{k²} → the ratio; compare polynomially in N
        // through the leading coefficients of the finite-N sum.
        for k in 1..=3usize {
            for h in 0..=k {
                let half = BigRational::new(BigInt::from(1), BigInt::from(2));
                let mut lead = BigRational::zero();
                for i in 0..=2 * h {
                    let p = m_ratio_finite_poly_n(k, i).unwrap();
                    let sign = if (h + i).is_multiple_of(2) {
                        rat(1)
                    } else {
                        rat(-1)
                    };
                    lead +=
                        sign * big(binomial(2 * h, i)) * half.pow((2 * h - i) as i32) * p.coeff(i);
                }
                let f = v_ratio_limit_ratfunc(h).unwrap();
                assert_eq!(f.evaluate(&rat(k as i64)).unwrap(), lead, "k={k} h={h}");
            }
        }
    }

    #[test]
    fn records() {
        let r = MomentRecord::compute(MomentKind::MRatioFinite, 1, 2, Some(2)).unwrap();
        assert_eq!(r.value, ratio(1, 3));
        assert_eq!(r.i_power(), 2);
        assert_eq!(r.convention(), "i-normalized");
        let v = MomentRecord::compute(MomentKind::VFinite, 1, 2, Some(2)).unwrap();
        assert_eq!(v.value, rat(2));
        assert!(MomentRecord::compute(MomentKind::VFinite, 1, 1, Some(2)).is_err());
        assert!(MomentRecord::compute(MomentKind::MRatioFinite, 1, 1, None).is_err());
        let z = MomentRecord::compute(MomentKind::MZeroLimit, 2, 0, Some(9)).unwrap();
        assert_eq!(z.n, None);
        assert_eq!(z.value, ratio(1, 12));
    }

    #[test]
    fn leading_constant() {
        assert_eq!(v_ratio_leading_constant(0), rat(1));
        assert_eq!(v_ratio_leading_constant(1), ratio(1, 4));
        assert_eq!(v_ratio_scaled_limit(1).unwrap(), Some(ratio(1, 4)));
    }
}
