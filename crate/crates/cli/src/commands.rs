use std::fmt;
use std::io;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use umoments::hypergeom::{self, HyperParams};
use umoments::mc::{self, McEstimate};
use umoments::moments::{self, check_m_domain, check_v_domain};
use umoments::{BigRational, Error, PolynomialQ, RationalFunctionQ};

use crate::output::Report;
use crate::MRatioArgs;

const SIGMAS: f64 = 4.0;
/// Excess kurtosis above which the standard error is flagged as unreliable.
const KURTOSIS_WARNING: f64 = 50.0;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Engine(Error),
    /// A verification ran to completion and failed.
    Check(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Engine(e) => match e {
                Error::Domain(_)
                | Error::Dimension(_)
                | Error::Pole(_)
                | Error::DivisionByZero(_)
                | Error::Unsupported(_) => 2,
                Error::Inconsistency(_) | Error::Numerical(_) => 3,
                Error::Capacity(_) => 4,
            },
            CliError::Check(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Check(msg) => f.write_str(msg),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "output failed: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Exact rationals are always written as "num/den".
pub fn exact(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn coeffs(p: &PolynomialQ) -> Vec<String> {
    p.coeffs().iter().map(exact).collect()
}

fn require_n(n: Option<usize>) -> CliResult<usize> {
    n.ok_or_else(|| CliError::Usage("missing required flag --N".into()))
}

fn parse_rational(flag: &str, s: &str) -> CliResult<BigRational> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: expected an integer or p/q, got {s:?}")))
}

#[derive(Serialize)]
struct MRatioRow {
    kind: &'static str,
    k: usize,
    r: usize,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    value: String,
    approx: f64,
    i_power: usize,
    convention: &'static str,
}

impl MRatioRow {
    fn new(record: moments::MomentRecord) -> Self {
        MRatioRow {
            kind: record.kind.as_str(),
            k: record.k,
            r: record.order,
            n: record.n,
            value: exact(&record.value),
            approx: approx(&record.value),
            i_power: record.i_power(),
            convention: record.convention(),
        }
    }
}

/// The (k, r) pairs requested, or a single pair with its domain enforced.
fn m_pairs(params: &MRatioArgs) -> CliResult<(Vec<(usize, usize)>, bool)> {
    match (params.k, params.r, &params.k_range, &params.r_range) {
        (Some(k), Some(r), None, None) => {
            check_m_domain(k, r)?;
            Ok((vec![(k, r)], true))
        }
        (k, r, k_range, r_range) => {
            let ks: Vec<usize> = match (k, k_range) {
                (Some(k), _) => vec![k],
                (None, Some(range)) => range.clone().collect(),
                (None, None) => return Err(CliError::Usage("missing --k or --k-range".into())),
            };
            let rs: Vec<usize> = match (r, r_range) {
                (Some(r), _) => vec![r],
                (None, Some(range)) => range.clone().collect(),
                (None, None) => return Err(CliError::Usage("missing --r or --r-range".into())),
            };
            let pairs: Vec<_> = ks
                .iter()
                .flat_map(|&k| rs.iter().map(move |&r| (k, r)))
                .filter(|&(k, r)| check_m_domain(k, r).is_ok())
                .collect();
            if pairs.is_empty() {
                return Err(
                    Error::Domain("no (k, r) in the sweep satisfies r <= 2k".into()).into(),
                );
            }
            Ok((pairs, false))
        }
    }
}

fn m_report(params: &MRatioArgs, kind: moments::MomentKind, n: Option<usize>) -> CliResult<Report> {
    let (pairs, single) = m_pairs(params)?;
    let rows = pairs
        .into_iter()
        .map(|(k, r)| {
            Ok(MRatioRow::new(moments::MomentRecord::compute(
                kind, k, r, n,
            )?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(if single {
        Report::one(rows.into_iter().next().expect("one pair"))
    } else {
        Report::many(rows)
    })
}

pub fn m_ratio(params: &MRatioArgs, n: Option<usize>) -> CliResult<Report> {
    // Domain errors take precedence over a missing --N.
    m_pairs(params)?;
    let n = require_n(n)?;
    m_report(params, moments::MomentKind::MRatioFinite, Some(n))
}

pub fn m_ratio_limit(params: &MRatioArgs) -> CliResult<Report> {
    m_report(params, moments::MomentKind::MRatioLimit, None)
}

#[derive(Serialize)]
struct RatfuncRow {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<usize>,
    variable: &'static str,
    numerator: Vec<String>,
    denominator: Vec<String>,
    rendered: String,
    even: bool,
    limit_at_infinity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    leading_constant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scaled_limit: Option<String>,
}

fn ratfunc_row(kind: &'static str, f: &RationalFunctionQ) -> RatfuncRow {
    RatfuncRow {
        kind,
        r: None,
        h: None,
        variable: "k",
        numerator: coeffs(f.num()),
        denominator: coeffs(f.den()),
        rendered: f.render("k"),
        even: f.is_even(),
        limit_at_infinity: f.limit_at_infinity().as_ref().map(exact),
        leading_constant: None,
        scaled_limit: None,
    }
}

pub fn ratfunc(r: usize) -> CliResult<Report> {
    let f = moments::m_ratio_limit_ratfunc(r)?;
    Ok(Report::one(RatfuncRow {
        r: Some(r),
        ..ratfunc_row("m_ratio_limit", &f)
    }))
}

pub fn v_ratfunc(h: usize) -> CliResult<Report> {
    let f = moments::v_ratio_limit_ratfunc(h)?;
    Ok(Report::one(RatfuncRow {
        h: Some(h),
        leading_constant: Some(exact(&moments::v_ratio_leading_constant(h))),
        scaled_limit: moments::v_ratio_scaled_limit(h)?.as_ref().map(exact),
        ..ratfunc_row("v_ratio_limit", &f)
    }))
}

#[derive(Serialize)]
struct ExactRow {
    kind: &'static str,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    value: String,
    approx: f64,
    convention: &'static str,
}

pub fn v_moment(k: usize, h: usize, n: Option<usize>) -> CliResult<Report> {
    check_v_domain(k, h)?;
    let n = require_n(n)?;
    let value = moments::v_moment_finite(k, h, n)?;
    Ok(Report::one(ExactRow {
        kind: "v_finite",
        k,
        h: Some(h),
        n: Some(n),
        value: exact(&value),
        approx: approx(&value),
        convention: "exact",
    }))
}

pub fn moment_zero(k: usize, n: Option<usize>) -> CliResult<Report> {
    let (kind, value) = match n {
        Some(n) => ("m_zero_finite", moments::moment_zero_finite(k, n)?),
        None => ("m_zero_limit", moments::moment_zero_limit(k)?),
    };
    Ok(Report::one(ExactRow {
        kind,
        k,
        h: None,
        n,
        value: exact(&value),
        approx: approx(&value),
        convention: "exact",
    }))
}

#[derive(Serialize)]
struct HypergeomRow {
    upper: Vec<String>,
    lower: Vec<String>,
    #[serde(rename = "N")]
    n: usize,
    max_degree: usize,
    layers: Vec<String>,
    z: Option<String>,
    value: Option<String>,
    approx: Option<f64>,
}

pub fn hypergeom(
    k: Option<usize>,
    n: usize,
    max_degree: usize,
    z: Option<&str>,
    upper: Option<Vec<String>>,
    lower: Option<Vec<String>>,
) -> CliResult<Report> {
    let params_from = |flag: &str, given: Option<Vec<String>>, scale: i64| -> CliResult<_> {
        match (given, k) {
            (Some(vals), _) => vals.iter().map(|s| parse_rational(flag, s)).collect(),
            (None, Some(k)) => Ok(vec![BigRational::from_integer((-scale * k as i64).into())]),
            (None, None) => Err(CliError::Usage(format!("missing --{flag} (or --k)"))),
        }
    };
    let z = z.map(|s| parse_rational("z", s)).transpose()?;
    let params = HyperParams {
        upper: params_from("upper", upper, 1)?,
        lower: params_from("lower", lower, 2)?,
        n,
        z: z.clone().unwrap_or_else(BigRational::zero),
        max_degree,
    };
    let layers = hypergeom::hyper_layers(&params)?;
    let value = match &z {
        Some(_) => Some(hypergeom::hyper_pfq_scalar(&params)?),
        None => None,
    };
    Ok(Report::one(HypergeomRow {
        upper: params.upper.iter().map(exact).collect(),
        lower: params.lower.iter().map(exact).collect(),
        n,
        max_degree,
        layers: layers.iter().map(exact).collect(),
        z: z.as_ref().map(exact),
        value: value.as_ref().map(exact),
        approx: value.as_ref().map(approx),
    }))
}

#[derive(Serialize)]
struct EgfRow {
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    r_max: usize,
    holds: bool,
    residuals: Vec<String>,
}

pub fn egf_check(k: usize, n: usize, r_max: usize) -> CliResult<Report> {
    let check = hypergeom::egf_check(k, n, r_max)?;
    let mut report = Report::one(EgfRow {
        k,
        n,
        r_max,
        holds: check.holds,
        residuals: check.residuals.iter().map(exact).collect(),
    });
    if !check.holds {
        report.failure = Some("generating series and 1F1 disagree".into());
    }
    Ok(report)
}

#[derive(Serialize)]
struct McRow {
    statistic: &'static str,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<usize>,
    #[serde(rename = "N")]
    n: usize,
    samples: usize,
    seed: u64,
    exact: String,
    exact_approx: f64,
    mean_real: f64,
    mean_imag: f64,
    std_error: f64,
    std_error_imag: f64,
    z_score: f64,
    within_4se: bool,
    imag_within_4se: bool,
    resampled: u64,
    kurtosis: f64,
}

pub fn mc_verify(
    k: usize,
    r: Option<usize>,
    h: Option<usize>,
    n: usize,
    samples: usize,
    seed: u64,
) -> CliResult<Report> {
    let (statistic, exact_value, est): (_, _, McEstimate) = match (r, h) {
        (Some(r), _) => (
            "m_ratio_finite",
            moments::m_ratio_finite(k, r, n)?,
            mc::estimate_m_moment(k, r, n, samples, seed)?,
        ),
        (None, Some(h)) => (
            "v_finite",
            moments::v_moment_finite(k, h, n)?,
            mc::estimate_v_moment(k, h, n, samples, seed)?,
        ),
        (None, None) => return Err(CliError::Usage("give one of --r or --h".into())),
    };
    if k >= 4 || est.kurtosis > KURTOSIS_WARNING {
        eprintln!(
            "warning: heavy-tailed statistic (k = {k}, excess kurtosis {:.1}); \
             the standard error may be unreliable",
            est.kurtosis
        );
    }
    let target = approx(&exact_value);
    let z_score = if est.std_error > 0.0 {
        (est.mean_real - target) / est.std_error
    } else {
        0.0
    };
    let within = est.agrees_with(target, SIGMAS);
    let imag_within = est.imag_vanishes(SIGMAS);
    let mut report = Report::one(McRow {
        statistic,
        k,
        r,
        h,
        n,
        samples,
        seed,
        exact: exact(&exact_value),
        exact_approx: target,
        mean_real: est.mean_real,
        mean_imag: est.mean_imag,
        std_error: est.std_error,
        std_error_imag: est.std_error_imag,
        z_score,
        within_4se: within,
        imag_within_4se: imag_within,
        resampled: est.resampled,
        kurtosis: est.kurtosis,
    });
    if !(within && imag_within) {
        report.failure = Some(format!(
            "Monte Carlo estimate is not within {SIGMAS} standard errors of {}",
            exact(&exact_value)
        ));
    }
    Ok(report)
}
