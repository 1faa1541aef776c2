//! Reduced versions of the exact identity suites, for a quick health check of
//! an installed binary.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use umoments::algebra::{factorial, rat, ratio};
use umoments::hypergeom::egf_check;
use umoments::moments::{
    m_ratio_finite, m_ratio_limit, m_ratio_limit_ratfunc, moment_zero_finite,
    v_ratio_leading_constant, v_ratio_scaled_limit,
};
use umoments::partition::{partitions, PartitionIter};
use umoments::schur::{binomial_check, reference_points, shifted_schur_rect};
use umoments::{BigRational, Result};

use crate::commands::CliError;
use crate::output::Report;

#[derive(Serialize)]
struct SuiteRow {
    suite: &'static str,
    passed: bool,
    checks: usize,
    detail: String,
}

/// Counts checks; the first failing one becomes the suite's detail.
#[derive(Default)]
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

fn plancherel(t: &mut Tally) -> Result<()> {
    for n in 0..=20 {
        let mass: BigRational = partitions(n)?.map(|l| l.plancherel_weight()).sum();
        t.check(mass.is_one(), || {
            format!("Plancherel mass at n={n} is {mass}")
        });
    }
    for n in 0..=10 {
        let mut total = BigUint::zero();
        for l in PartitionIter::new(n) {
            let f = l.dim_sym()?;
            total += &f * &f;
        }
        t.check(total == factorial(n), || {
            format!("sum of f^2 at n={n} is {total}")
        });
    }
    Ok(())
}

fn small_table(t: &mut Tally) -> Result<()> {
    for k in 1..=5 {
        for n in 1..=10 {
            let v = m_ratio_finite(k, 1, n)?;
            t.check(v == ratio(n as i64, 2), || {
                format!("m(k={k},r=1,N={n}) = {v}")
            });
        }
    }
    let v = m_ratio_finite(1, 2, 2)?;
    t.check(v == ratio(1, 3), || format!("m(1,2,2) = {v}"));
    for (k, r, expected) in [
        (1, 1, ratio(1, 2)),
        (1, 2, ratio(1, 6)),
        (2, 2, ratio(7, 30)),
    ] {
        let v = m_ratio_limit(k, r)?;
        t.check(v == expected, || format!("limit m(k={k},r={r}) = {v}"));
    }
    Ok(())
}

fn zeroth(t: &mut Tally) -> Result<()> {
    // moment_zero_finite itself cross-checks hook-content against Barnes G
    for k in 1..=6 {
        for n in 1..=6 {
            moment_zero_finite(k, n)?;
            t.check(true, String::new);
        }
    }
    let v = moment_zero_finite(2, 2)?;
    t.check(v == rat(20), || format!("M0(2,2) = {v}"));
    Ok(())
}

fn shifted_schur(t: &mut Tally) -> Result<()> {
    for size in 0..=6 {
        for mu in PartitionIter::new(size) {
            for k in 1..=4 {
                for n in 1..=4 {
                    shifted_schur_rect(&mu, k, n)?;
                    t.check(true, String::new);
                }
            }
        }
    }
    Ok(())
}

fn binomial(t: &mut Tally) -> Result<()> {
    for k in 1..=2 {
        for rows in 1..=2 {
            for n in rows..=4 {
                for x in reference_points(n) {
                    let c = binomial_check(k, rows, n, &x)?;
                    t.check(c.holds, || {
                        format!("k={k} N={rows} n={n}: residual {}", c.residual)
                    });
                }
            }
        }
    }
    Ok(())
}

fn ratfuncs(t: &mut Tally) -> Result<()> {
    for r in 0..=8usize {
        let f = m_ratio_limit_ratfunc(r)?;
        t.check(f.is_even(), || format!("r={r}: not even"));
        t.check(f.num().degree() == f.den().degree(), || {
            format!("r={r}: degrees differ")
        });
        let expected = BigRational::new(1.into(), (1u64 << r).into());
        t.check(f.limit_at_infinity() == Some(expected), || {
            format!("r={r}: limit {:?}", f.limit_at_infinity())
        });
    }
    for h in 0..=3 {
        let scaled = v_ratio_scaled_limit(h)?;
        t.check(scaled == Some(v_ratio_leading_constant(h)), || {
            format!("h={h}: scaled limit {scaled:?}")
        });
    }
    Ok(())
}

fn egf(t: &mut Tally) -> Result<()> {
    for k in 1..=3 {
        for n in 1..=3 {
            let c = egf_check(k, n, 2 * k)?;
            t.check(c.holds, || {
                format!("k={k} N={n}: residuals {:?}", c.residuals)
            });
        }
    }
    Ok(())
}

type Suite = fn(&mut Tally) -> Result<()>;

pub fn run() -> std::result::Result<Report, CliError> {
    let suites: [(&'static str, Suite); 7] = [
        ("plancherel", plancherel),
        ("small-table", small_table),
        ("zeroth-moments", zeroth),
        ("shifted-schur", shifted_schur),
        ("binomial-theorem", binomial),
        ("rational-functions", ratfuncs),
        ("egf-1f1", egf),
    ];
    let mut failed = 0;
    let rows: Vec<SuiteRow> = suites
        .into_iter()
        .map(|(suite, run)| {
            let mut tally = Tally::default();
            let detail = match run(&mut tally) {
                Err(e) => Some(e.to_string()),
                Ok(()) => tally.failure,
            };
            failed += usize::from(detail.is_some());
            SuiteRow {
                suite,
                passed: detail.is_none(),
                checks: tally.checks,
                detail: detail.unwrap_or_default(),
            }
        })
        .collect();
    let mut report = Report::many(rows);
    if failed > 0 {
        report.failure = Some(format!("{failed} selftest suite(s) failed"));
    }
    Ok(report)
}
