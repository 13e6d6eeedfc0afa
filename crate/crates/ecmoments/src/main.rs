//! Command-line front end: moment sweeps, closed-form verification,
//! fluctuation reports, rank estimates and rank-bound reports.
//!
//! Exit codes: 0 success / all match, 1 verification mismatch, 2 usage
//! error, 3 brute-force budget breach.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use ecmoments::family_moments::{
    self, all_curves_moments, first_moment, moments, nagao_rank_estimate, verify_family,
    CatalogId, FamilySpec,
};
use ecmoments::legendre_sums::{brute_char_sum, quadratic_char_sum, shifted_product_sum};
use ecmoments::modarith::OddPrime;
use ecmoments::rank_bounds::{
    average_rank_bound_with, prime_sum_constants, s2_asymptotic_with, s2_direct, PrimeSumConstants,
    CONSTANTS_CUTOFF, PAPER_K1, PAPER_K2,
};
use ecmoments::sharpness::{histogram_from_records, sweep_records};
use ecmoments::{primes, Error, Result};

const EXIT_MISMATCH: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "ecmoments",
    version,
    about = "Moments of elliptic-curve point-count deviations over one-parameter families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep brute-force moments over primes and emit CSV rows p,A1,A2
    Moments {
        /// Catalog name (see `verify --help`) or path to a family TOML file
        #[arg(long)]
        family: String,
        /// Smallest prime considered (at least 3)
        #[arg(long)]
        pmin: u64,
        /// Largest prime considered
        #[arg(long)]
        pmax: u64,
        /// 1 emits A1 only, 2 emits both moments
        #[arg(long, default_value_t = 2)]
        order: u8,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check brute-force second moments against the closed-form catalog
    Verify {
        /// One of: all_curves, j0_quadratic, cm4_linear, legendre_type,
        /// shifted_cubic, main_theorem, rank2_t2, rank2_t4, appendix_a,
        /// appendix_b
        #[arg(long)]
        family: String,
        /// Largest prime verified
        #[arg(long)]
        pmax: u64,
    },
    /// Fluctuation sweep for y^2 = x^3 + Tx^2 + 1: per-prime records plus an
    /// interval-coverage histogram of the normalized p^(3/2) term
    Sharpness {
        /// Largest prime swept (at most 10^6)
        #[arg(long)]
        pmax: u64,
        /// Width of the histogram bins over [-2, 2]
        #[arg(long, default_value_t = 0.5)]
        bin_width: f64,
        /// Write the per-prime records here (histogram then goes to stdout);
        /// without it records go to stdout and the histogram to stderr
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nagao rank estimate -(1/X) sum_{p<=X} (log p / p) A1(p)
    RankEstimate {
        /// Catalog name or family TOML file
        #[arg(long)]
        family: String,
        /// The cutoff X (named pmax since it caps the prime sweep)
        #[arg(long)]
        pmax: u64,
    },
    /// Average-rank upper bound 1/sigma + r + 1/2 + correction
    RankBound {
        /// Rank of the family over Q(T)
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Support parameter of the test function
        #[arg(long)]
        sigma: f64,
        /// Average log-conductor; alternatively pass --n and --a for a log N^a
        #[arg(long)]
        log_r: Option<f64>,
        /// Conductor scale N (used as log R = a log N)
        #[arg(long)]
        n: Option<f64>,
        /// Conductor exponent a (used as log R = a log N)
        #[arg(long)]
        a: Option<f64>,
        /// Coefficient m_E of the -p term in the second moment
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        /// Use the rounded constants or re-sieve them up to 10^7
        #[arg(long, value_enum, default_value_t = ConstantsMode::Paper)]
        constants: ConstantsMode,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form character sums for scripting
    Legendre {
        #[command(subcommand)]
        sum: LegendreCommand,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstantsMode {
    /// 0.986 and 2.966
    Paper,
    /// Sieve 2 sum log p / p^2 and 4 sum (log p)^2 / p^2 up to 10^7
    Computed,
}

#[derive(Subcommand)]
enum LegendreCommand {
    /// sum_x chi(n1 + x) chi(n2 + x): p - 1 if p | n1 - n2, else -1
    ShiftedProduct { n1: i64, n2: i64, p: u64 },
    /// sum_t chi(a t^2 + b t + c) in closed form
    Quadratic { a: i64, b: i64, c: i64, p: u64 },
    /// Brute-force sum_t chi(f(t)); coefficients ascending, comma-separated
    CharSum { coeffs: String, p: u64 },
}

enum FamilyArg {
    Catalog(CatalogId),
    File(FamilySpec),
}

fn resolve_family(name: &str) -> Result<FamilyArg> {
    if let Some(id) = CatalogId::parse(name) {
        return Ok(FamilyArg::Catalog(id));
    }
    if Path::new(name).exists() {
        return Ok(FamilyArg::File(FamilySpec::from_path(name)?));
    }
    Err(Error::UnknownFamily(name.to_owned()))
}

fn out_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn prime_arg(p: u64) -> Result<OddPrime> {
    OddPrime::new(p)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Moments { family, pmin, pmax, order, out } => {
            cmd_moments(&family, pmin, pmax, order, &out)
        }
        Command::Verify { family, pmax } => cmd_verify(&family, pmax),
        Command::Sharpness { pmax, bin_width, out } => cmd_sharpness(pmax, bin_width, &out),
        Command::RankEstimate { family, pmax } => cmd_rank_estimate(&family, pmax),
        Command::RankBound { r, sigma, log_r, n, a, m, constants, out } => {
            cmd_rank_bound(r, sigma, log_r, n, a, m, constants, &out)
        }
        Command::Legendre { sum } => cmd_legendre(sum),
    }
}

fn cmd_moments(
    family: &str,
    pmin: u64,
    pmax: u64,
    order: u8,
    out: &Option<PathBuf>,
) -> Result<i32> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!("order must be 1 or 2, got {order}")));
    }
    if pmin < 3 || pmin > pmax {
        return Err(Error::InvalidArgument(format!(
            "need 3 <= pmin <= pmax, got {pmin}..{pmax}"
        )));
    }
    let family = resolve_family(family)?;
    let budget = match family {
        FamilyArg::Catalog(CatalogId::AllCurves) => family_moments::TWO_PARAM_BRUTE_MAX,
        _ => family_moments::ONE_PARAM_BRUTE_MAX,
    };
    if pmax > budget {
        return Err(Error::BudgetExceeded { p: pmax, max: budget });
    }
    let ps = primes::primes_in_range(pmin.max(3), pmax);
    let rows: Vec<(u64, i64, Option<i64>)> = match &family {
        FamilyArg::Catalog(CatalogId::AllCurves) => ps
            .par_iter()
            .map(|&q| {
                let (a1, a2) = all_curves_moments(prime_arg(q)?)?;
                Ok((q, a1, (order == 2).then_some(a2)))
            })
            .collect::<Result<_>>()?,
        FamilyArg::Catalog(id) => {
            let spec = id.family().expect("one-parameter catalog entry");
            moment_rows(&spec, &ps, order)?
        }
        FamilyArg::File(spec) => moment_rows(spec, &ps, order)?,
    };
    let mut w = out_writer(out)?;
    writeln!(w, "p,A1,A2")?;
    for (p, a1, a2) in rows {
        match a2 {
            Some(a2) => writeln!(w, "{p},{a1},{a2}")?,
            None => writeln!(w, "{p},{a1},")?,
        }
    }
    w.flush()?;
    Ok(0)
}

fn moment_rows(
    spec: &FamilySpec,
    ps: &[u64],
    order: u8,
) -> Result<Vec<(u64, i64, Option<i64>)>> {
    ps.par_iter()
        .map(|&q| {
            let q = prime_arg(q)?;
            if order == 2 {
                let rec = moments(spec, q);
                Ok((q.get(), rec.a1, Some(rec.a2)))
            } else {
                Ok((q.get(), first_moment(spec, q), None))
            }
        })
        .collect()
}

fn cmd_verify(family: &str, pmax: u64) -> Result<i32> {
    let id = CatalogId::parse(family).ok_or_else(|| Error::UnknownFamily(family.to_owned()))?;
    let budget = if id == CatalogId::AllCurves {
        family_moments::TWO_PARAM_BRUTE_MAX
    } else {
        family_moments::ONE_PARAM_BRUTE_MAX
    };
    if pmax > budget {
        return Err(Error::BudgetExceeded { p: pmax, max: budget });
    }
    let reports = primes::odd_primes_up_to(pmax)
        .par_iter()
        .map(|&q| verify_family(id, prime_arg(q)?))
        .collect::<Result<Vec<_>>>()?;
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    writeln!(w, "p,brute,closed,match,gated")?;
    let mut first_mismatch = None;
    for r in &reports {
        // the closed forms are pinned for p >= 5; p = 3 is reported only
        let gated = r.p.get() >= 5;
        writeln!(w, "{},{},{},{},{}", r.p, r.brute, r.closed, r.matches, gated)?;
        if gated && !r.matches && first_mismatch.is_none() {
            first_mismatch = Some(r.p);
        }
    }
    w.flush()?;
    if let Some(p) = first_mismatch {
        eprintln!("closed form mismatch at p = {p}");
        return Ok(EXIT_MISMATCH);
    }
    Ok(0)
}

fn cmd_sharpness(pmax: u64, bin_width: f64, out: &Option<PathBuf>) -> Result<i32> {
    const SWEEP_MAX: u64 = 1_000_000;
    if pmax > SWEEP_MAX {
        return Err(Error::BudgetExceeded { p: pmax, max: SWEEP_MAX });
    }
    if !(bin_width > 0.0 && bin_width <= 4.0) {
        return Err(Error::InvalidArgument(format!(
            "bin width must lie in (0, 4], got {bin_width}"
        )));
    }
    let records = sweep_records(pmax);
    let report = histogram_from_records(&records, pmax, bin_width);

    let write_records = |w: &mut dyn Write| -> io::Result<()> {
        writeln!(w, "p,n32,fluct,normalized,theta")?;
        for r in &records {
            writeln!(w, "{},{},{},{:.6},{:.6}", r.p, r.n32, r.fluct, r.normalized, r.theta)?;
        }
        w.flush()
    };
    let write_histogram = |w: &mut dyn Write| -> io::Result<()> {
        writeln!(
            w,
            "bin,fluct_lo,fluct_hi,fluct_count,theta_lo,theta_hi,theta_count,theta_fraction"
        )?;
        for i in 0..report.bins() {
            let (flo, fhi) = report.fluct_bin_edges(i);
            let (tlo, thi) = report.theta_bin_edges(i);
            writeln!(
                w,
                "{i},{flo:.6},{fhi:.6},{},{tlo:.6},{thi:.6},{},{:.6}",
                report.fluct_bins[i],
                report.theta_bins[i],
                report.theta_fraction(i)
            )?;
        }
        w.flush()
    };

    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write_records(&mut f)?;
            let stdout = io::stdout();
            write_histogram(&mut stdout.lock())?;
        }
        None => {
            let stdout = io::stdout();
            write_records(&mut stdout.lock())?;
            let stderr = io::stderr();
            write_histogram(&mut stderr.lock())?;
        }
    }
    Ok(0)
}

fn cmd_rank_estimate(family: &str, x: u64) -> Result<i32> {
    const UNCATALOGED_MAX: u64 = 100_000;
    if x < 100 {
        return Err(Error::InvalidArgument(format!("the estimator needs X >= 100, got {x}")));
    }
    let (spec, expected) = match resolve_family(family)? {
        FamilyArg::Catalog(CatalogId::AllCurves) => {
            return Err(Error::InvalidArgument(
                "rank estimates need a one-parameter family".to_owned(),
            ));
        }
        FamilyArg::Catalog(id) => (id.family().expect("one-parameter"), Some(id.rank())),
        FamilyArg::File(spec) => {
            if x > UNCATALOGED_MAX {
                return Err(Error::BudgetExceeded { p: x, max: UNCATALOGED_MAX });
            }
            (spec, None)
        }
    };
    let estimate = nagao_rank_estimate(&spec, x);
    println!("family = \"{}\"", spec.name);
    println!("x = {x}");
    println!("estimate = {estimate:.6}");
    if let Some(rank) = expected {
        println!("expected_rank = {rank}");
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_rank_bound(
    r: u32,
    sigma: f64,
    log_r: Option<f64>,
    n: Option<f64>,
    a: Option<f64>,
    m: f64,
    constants: ConstantsMode,
    out: &Option<PathBuf>,
) -> Result<i32> {
    let log_r = match (log_r, n, a) {
        (Some(v), _, _) => v,
        (None, Some(n), Some(a)) => a * n.ln(),
        _ => {
            return Err(Error::InvalidArgument(
                "pass --log-r, or both --n and --a".to_owned(),
            ));
        }
    };
    let bad = |v: f64| !v.is_finite() || v < 0.0;
    if bad(sigma) || sigma == 0.0 || bad(log_r) || log_r == 0.0 || bad(m) {
        return Err(Error::InvalidArgument(format!(
            "need sigma > 0, log R > 0 and m >= 0; got sigma = {sigma}, log R = {log_r}, m = {m}"
        )));
    }
    let sieved: Option<PrimeSumConstants> = match constants {
        ConstantsMode::Paper => None,
        ConstantsMode::Computed => Some(prime_sum_constants(CONSTANTS_CUTOFF)),
    };
    let (k1, k2) = match &sieved {
        None => (PAPER_K1, PAPER_K2),
        Some(c) => (2.0 * c.c1, 4.0 * c.c2),
    };
    let report = average_rank_bound_with(k1, k2, r, sigma, log_r, m);
    let s2d = s2_direct(sigma, log_r, m);
    let s2a = s2_asymptotic_with(k1, k2, sigma, log_r, m);

    let mut w = out_writer(out)?;
    writeln!(w, "[inputs]")?;
    writeln!(w, "r = {r}")?;
    writeln!(w, "sigma = {sigma}")?;
    writeln!(w, "log_r = {log_r:.6}")?;
    writeln!(w, "m_e = {m}")?;
    writeln!(w)?;
    writeln!(w, "[constants]")?;
    match &sieved {
        None => {
            writeln!(w, "mode = \"paper\"")?;
            writeln!(w, "k1 = {PAPER_K1}")?;
            writeln!(w, "k2 = {PAPER_K2}")?;
        }
        Some(c) => {
            writeln!(w, "mode = \"computed\"")?;
            writeln!(w, "k1 = {k1:.6}")?;
            writeln!(w, "k2 = {k2:.6}")?;
            writeln!(w, "paper_k1 = {PAPER_K1}")?;
            writeln!(w, "paper_k2 = {PAPER_K2}")?;
            writeln!(w, "c1 = {:.9}", c.c1)?;
            writeln!(w, "c2 = {:.9}", c.c2)?;
            writeln!(w, "c1_tail_bound = {:.3e}", c.c1_tail)?;
            writeln!(w, "c2_tail_bound = {:.3e}", c.c2_tail)?;
            writeln!(w, "p_cut = {}", c.p_cut)?;
        }
    }
    writeln!(w)?;
    writeln!(w, "[result]")?;
    writeln!(w, "one_over_sigma = {:.6}", report.one_over_sigma)?;
    writeln!(w, "correction = {:.6}", report.correction)?;
    writeln!(w, "bound = {:.6}", report.bound)?;
    writeln!(w)?;
    writeln!(w, "[s2]")?;
    writeln!(w, "direct = {s2d:.9}")?;
    writeln!(w, "asymptotic = {s2a:.9}")?;
    writeln!(w, "difference = {:.3e}", s2d - s2a)?;
    writeln!(w)?;
    writeln!(w, "[notes]")?;
    writeln!(
        w,
        "omitted = \"error terms of size O(log log R / log R) are dropped from the bound\""
    )?;
    w.flush()?;
    Ok(0)
}

fn cmd_legendre(sum: LegendreCommand) -> Result<i32> {
    match sum {
        LegendreCommand::ShiftedProduct { n1, n2, p } => {
            println!("{}", shifted_product_sum(n1, n2, prime_arg(p)?));
        }
        LegendreCommand::Quadratic { a, b, c, p } => {
            println!("{}", quadratic_char_sum(a, b, c, prime_arg(p)?)?);
        }
        LegendreCommand::CharSum { coeffs, p } => {
            let coeffs: Vec<i64> = coeffs
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad coefficient `{c}`")))
                })
                .collect::<Result<_>>()?;
            if coeffs.len() > ecmoments::legendre_sums::MAX_BRUTE_DEGREE + 1 {
                return Err(Error::InvalidArgument(format!(
                    "polynomial degree exceeds {}",
                    ecmoments::legendre_sums::MAX_BRUTE_DEGREE
                )));
            }
            println!("{}", brute_char_sum(&coeffs, prime_arg(p)?));
        }
    }
    Ok(0)
}
