mod commands;
mod output;
mod selftest;

use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "umoments",
    version,
    about = "Exact moments of derivatives of unitary characteristic polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads: a positive count or "auto".
    #[arg(long, global = true, env = "UM_THREADS", default_value = "auto", value_parser = parse_threads)]
    threads: Threads,
}

#[derive(Clone, Copy, Debug)]
enum Threads {
    Auto,
    Count(usize),
}

fn parse_threads(s: &str) -> Result<Threads, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Threads::Auto);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!(
            "expected a positive integer or \"auto\", got {s:?}"
        )),
        Ok(n) => Ok(Threads::Count(n)),
    }
}

/// Inclusive range written `LO..HI`, `LO..=HI` or a single value.
pub(crate) fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected LO..HI or a single integer, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

#[derive(Args, Debug, Clone)]
pub(crate) struct MRatioArgs {
    #[arg(long, required_unless_present = "k_range")]
    pub k: Option<usize>,
    #[arg(long, required_unless_present = "r_range")]
    pub r: Option<usize>,
    /// Sweep k over LO..HI (one row per valid (k, r)).
    #[arg(long, value_parser = parse_range, conflicts_with = "k")]
    pub k_range: Option<RangeInclusive<usize>>,
    /// Sweep r over LO..HI; pairs with r > 2k are skipped.
    #[arg(long, value_parser = parse_range, conflicts_with = "r")]
    pub r_range: Option<RangeInclusive<usize>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-N moment ratio i^r·M_N(2k,r)/M_N(2k,0).
    MRatio {
        #[command(flatten)]
        params: MRatioArgs,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Large-N limit of the moment ratio, divided by N^r.
    MRatioLimit {
        #[command(flatten)]
        params: MRatioArgs,
    },
    /// The limiting moment ratio as a rational function of k.
    Ratfunc {
        #[arg(long)]
        r: usize,
    },
    /// Finite-N moment E|V|^{2k}|V'/V|^{2h}.
    VMoment {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: usize,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Limiting ratio V(2k,2h)/V(2k,0) as a rational function of k.
    VRatfunc {
        #[arg(long)]
        h: usize,
    },
    /// Zeroth moment E|Z|^{2k}; the N^{k²}-normalized limit without --N.
    MomentZero {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Truncated pFq at a scalar matrix z·Id_N (defaults to 1F1(-k;-2k)).
    Hypergeom {
        /// Fills in --upper -k and --lower -2k when those are absent.
        #[arg(long, required_unless_present_all = ["upper", "lower"])]
        k: Option<usize>,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        max_degree: usize,
        /// Scalar argument as an integer or fraction "p/q".
        #[arg(long)]
        z: Option<String>,
        /// Comma-separated upper parameters.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        upper: Option<Vec<String>>,
        /// Comma-separated lower parameters.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lower: Option<Vec<String>>,
    },
    /// Compare the moment generating series with 1F1(-k;-2k;z·Id_N).
    EgfCheck {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        r_max: usize,
    },
    /// Monte Carlo estimate against the exact value (give --r or --h).
    McVerify {
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "h", required_unless_present = "h")]
        r: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the exact identity suites.
    Selftest,
}

fn run(cli: Cli) -> Result<(), commands::CliError> {
    let report = match cli.command {
        Command::MRatio { params, n } => commands::m_ratio(&params, n)?,
        Command::MRatioLimit { params } => commands::m_ratio_limit(&params)?,
        Command::Ratfunc { r } => commands::ratfunc(r)?,
        Command::VMoment { k, h, n } => commands::v_moment(k, h, n)?,
        Command::VRatfunc { h } => commands::v_ratfunc(h)?,
        Command::MomentZero { k, n } => commands::moment_zero(k, n)?,
        Command::Hypergeom {
            k,
            n,
            max_degree,
            z,
            upper,
            lower,
        } => commands::hypergeom(k, n, max_degree, z.as_deref(), upper, lower)?,
        Command::EgfCheck { k, n, r_max } => commands::egf_check(k, n, r_max)?,
        Command::McVerify {
            k,
            r,
            h,
            n,
            samples,
            seed,
        } => commands::mc_verify(k, r, h, n, samples, seed)?,
        Command::Selftest => selftest::run()?,
    };
    let failure = report.failure.clone();
    output::emit(&report, cli.format).map_err(commands::CliError::Io)?;
    match failure {
        Some(msg) => Err(commands::CliError::Check(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Threads::Count(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: could not configure {n} threads: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
