//! Command-line front end.  [`run`] parses arguments, does the work and
//! returns the process exit code.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::critical_line::find_zeros;
use crate::error::{Error, Result};
use crate::fmt_sig;
use crate::ladder::{Ladder, LadderConfig};
use crate::quadrature::{CacheFormat, GridSpec, DEFAULT_OVERSAMPLE};
use crate::verify::{self, SubstFn, SubstForm, SweepKind, TrendCheck, VerificationReport};
use crate::Lab;

/// Exit code for computation errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit code when an assertable report or a trend fails.
pub const EXIT_FAILED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheKind {
    Bin,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "jll", version, about = "ladder solutions of the Hardy-Littlewood equation at desk scale")]
pub struct Cli {
    /// Grid cache directory
    #[arg(long, global = true, env = "JLL_CACHE")]
    pub cache: Option<PathBuf>,
    /// Grid cache file format
    #[arg(long, global = true, value_enum, default_value = "bin")]
    pub cache_format: CacheKind,
    /// Worker threads
    #[arg(long, global = true, env = "JLL_THREADS")]
    pub threads: Option<usize>,
    /// Output format (default: json for verify and sweep, csv otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// mu[x] = a x ln x
    #[arg(long = "a", global = true, default_value_t = 7.0)]
    pub a_param: f64,
    /// Window exponent epsilon
    #[arg(long, global = true, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Solver residual limit
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// GL15 panels per mean zero gap
    #[arg(long, global = true, default_value_t = DEFAULT_OVERSAMPLE)]
    pub oversample: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grid cache maintenance
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
    /// Solve the ladder equation at T
    Ladder {
        #[arg(long = "T", num_args = 1.., value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Zeros of Z on [lo, hi]
    Zeros {
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
    },
    /// phi1 on [T, T+U] at evenly spaced points
    Profile {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "U")]
        u: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// A single verification
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// One check over a list of T, with the cross-decade trend where defined
    Sweep {
        #[arg(long, value_enum)]
        name: SweepName,
        #[arg(long = "T-list", num_args = 1.., value_delimiter = ',', required = true)]
        t_list: Vec<f64>,
        /// n for cheb, k for selberg
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// Extend the grid to tmax and write it to the cache directory
    Build {
        #[arg(long)]
        tmax: f64,
    },
}

#[derive(Args, Debug)]
pub struct TArg {
    #[arg(long = "T")]
    pub t: f64,
}

#[derive(Subcommand, Debug)]
pub enum Check {
    Thm1 {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "U")]
        u: f64,
    },
    Fundamental(TArg),
    /// Slope of the fundamental chord
    Chord(TArg),
    Meanvalue {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "N")]
        n: f64,
        #[arg(long = "M")]
        m: f64,
    },
    Thm2(TArg),
    Prediction {
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 16)]
        per_gap: usize,
    },
    Subst {
        /// one, linear, cheb:N, prime_pi, selberg:K
        #[arg(long = "f", value_parser = parse_subst_fn)]
        f: SubstFn,
        #[arg(long, value_enum, default_value = "inverse")]
        form: FormName,
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "U")]
        u: f64,
    },
    Cheb {
        #[arg(long)]
        n: u32,
        #[arg(long = "T")]
        t: f64,
    },
    Selberg {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long = "T")]
        t: f64,
    },
    Gaplaw {
        #[arg(long = "T-list", num_args = 1.., value_delimiter = ',', required = true)]
        t_list: Vec<f64>,
    },
    Lemma1(TArg),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormName {
    Transport,
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepName {
    Gaplaw,
    Fundamental,
    Chord,
    Thm1,
    Thm2,
    Cheb,
    Selberg,
    Prediction,
    Lemma1,
}

fn parse_subst_fn(s: &str) -> std::result::Result<SubstFn, String> {
    let (head, arg) = match s.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (s, None),
    };
    let num = |a: Option<&str>| -> std::result::Result<u32, String> {
        a.ok_or_else(|| format!("{head} needs an order, e.g. {head}:3"))?
            .parse()
            .map_err(|e| format!("{e}"))
    };
    match head {
        "one" => Ok(SubstFn::One),
        "linear" => Ok(SubstFn::Linear),
        "cheb" => Ok(SubstFn::Chebyshev(num(arg)?)),
        "prime_pi" => Ok(SubstFn::PrimePi),
        "selberg" => Ok(SubstFn::SelbergPow(num(arg)?)),
        _ => Err(format!("unknown function {s}")),
    }
}

impl SweepName {
    fn kind(self, order: u32) -> SweepKind {
        match self {
            SweepName::Gaplaw => SweepKind::GapLaw,
            SweepName::Fundamental => SweepKind::Fundamental,
            SweepName::Chord => SweepKind::FundamentalChord,
            SweepName::Thm1 => SweepKind::Theorem1,
            SweepName::Thm2 => SweepKind::Theorem2,
            SweepName::Cheb => SweepKind::Chebyshev(order),
            SweepName::Selberg => SweepKind::Selberg(order),
            SweepName::Prediction => SweepKind::Prediction,
            SweepName::Lemma1 => SweepKind::Lemma1,
        }
    }
}

/// Default cache directory: $XDG_CACHE_HOME/jll, else ~/.cache/jll, else
/// ./.jll-cache.
pub fn default_cache_dir() -> PathBuf {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(x).join("jll");
    }
    if let Some(h) = std::env::var_os("HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(h).join(".cache").join("jll");
    }
    PathBuf::from(".jll-cache")
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("jll: {e}");
            match e {
                Error::Config(_) | Error::Domain { .. } => EXIT_USAGE,
                _ => EXIT_ERROR,
            }
        }
    }
}

fn open_out(cli: &Cli) -> Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn lab_for(cli: &Cli) -> Result<Lab> {
    let spec = GridSpec {
        oversample: cli.oversample,
        ..GridSpec::default()
    };
    spec.validate()?;
    let dir = cli.cache.clone().unwrap_or_else(default_cache_dir);
    std::fs::create_dir_all(&dir)?;
    let fmt = match cli.cache_format {
        CacheKind::Bin => CacheFormat::Binary,
        CacheKind::Csv => CacheFormat::Csv,
    };
    Lab::with_cache_dir(spec, &dir, fmt)
}

fn config_for(cli: &Cli) -> Result<LadderConfig> {
    let cfg = LadderConfig {
        a_param: cli.a_param,
        epsilon: cli.epsilon,
        tol_residual: cli.tol,
        ..LadderConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be a positive real, got {v}")))
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = config_for(cli)?;
    if let Command::Zeros { lo, hi } = cli.command {
        if !(lo >= 10.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Config("zeros needs 10 <= lo < hi".into()));
        }
        let hz = crate::critical_line::HardyZ::default();
        let pairs: Vec<_> = find_zeros(&hz, lo, hi)?.into_iter().filter(|p| p.gamma <= hi).collect();
        let mut out = open_out(cli)?;
        match cli.format.unwrap_or(Format::Csv) {
            Format::Csv => {
                writeln!(out, "gamma,gamma_prime")?;
                for p in &pairs {
                    writeln!(out, "{},{}", fmt_sig(p.gamma), fmt_sig(p.gamma_prime))?;
                }
            }
            Format::Json => {
                for p in &pairs {
                    let v = serde_json::json!({
                        "gamma": crate::round_sig(p.gamma),
                        "gamma_prime": crate::round_sig(p.gamma_prime),
                    });
                    writeln!(out, "{v}")?;
                }
            }
        }
        out.flush()?;
        return Ok(0);
    }

    let mut lab = lab_for(cli)?;
    let code = {
        let lad = Ladder::new(&lab, cfg)?;
        dispatch(cli, &lad)?
    };
    lab.persist()?;
    Ok(code)
}

fn dispatch(cli: &Cli, lad: &Ladder<'_>) -> Result<i32> {
    let json = cli.format.unwrap_or(Format::Json) == Format::Json;
    match &cli.command {
        Command::Zeros { .. } => unreachable!(),
        Command::Cache { action } => {
            let CacheAction::Build { tmax } = action;
            check_positive("--tmax", *tmax)?;
            lad.lab().quad().ensure(*tmax);
            let mut out = open_out(cli)?;
            let g = lad.lab().quad().grid();
            writeln!(out, "cells,t_end")?;
            writeln!(out, "{},{}", g.cells().len(), fmt_sig(g.t_end()))?;
            out.flush()?;
            Ok(0)
        }
        Command::Ladder { t } => {
            let mut out = open_out(cli)?;
            let json = cli.format == Some(Format::Json);
            if !json {
                writeln!(out, "T,phi,residual,a")?;
            }
            for &t in t {
                let p = lad.solve(t)?;
                if json {
                    let v = serde_json::json!({
                        "T": crate::round_sig(p.t),
                        "phi": crate::round_sig(p.phi),
                        "residual": crate::round_sig(p.residual),
                        "a": crate::round_sig(p.a_param),
                    });
                    writeln!(out, "{v}")?;
                } else {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_sig(p.t),
                        fmt_sig(p.phi),
                        fmt_sig(p.residual),
                        fmt_sig(p.a_param)
                    )?;
                }
            }
            out.flush()?;
            Ok(0)
        }
        Command::Profile { t, u, points } => {
            let p = lad.profile(*t, *u)?;
            let mut out = open_out(cli)?;
            p.dump_csv(&mut out, *points)?;
            out.flush()?;
            Ok(0)
        }
        Command::Verify { check } => {
            let (reports, trend) = run_check(lad, check)?;
            emit(cli, json, &reports, trend.as_ref())
        }
        Command::Sweep { name, t_list, order } => {
            let (reports, trend) = verify::sweep(lad, name.kind(*order), t_list)?;
            emit(cli, json, &reports, trend.as_ref())
        }
    }
}

fn run_check(lad: &Ladder<'_>, check: &Check) -> Result<(Vec<VerificationReport>, Option<TrendCheck>)> {
    let one = |r: Result<VerificationReport>| r.map(|r| (vec![r], None));
    match check {
        Check::Thm1 { t, u } => one(verify::verify_theorem1(lad, *t, *u)),
        Check::Fundamental(a) => one(verify::verify_fundamental(lad, a.t)),
        Check::Chord(a) => one(verify::verify_fundamental_chord(lad, a.t)),
        Check::Meanvalue { t, n, m } => one(verify::verify_mean_value(lad, *t, *n, *m)),
        Check::Thm2(a) => one(verify::verify_theorem2(lad, a.t)),
        Check::Prediction { t, per_gap } => one(verify::point_prediction(lad, *t, *per_gap)),
        Check::Subst { f, form, t, u } => {
            let form = match form {
                FormName::Transport => SubstForm::Transport,
                FormName::Forward => SubstForm::Forward,
                FormName::Inverse => SubstForm::Inverse,
            };
            one(verify::verify_substitution(lad, *f, form, *t, *u))
        }
        Check::Cheb { n, t } => one(verify::verify_chebyshev(lad, *n, *t)),
        Check::Selberg { k, t } => one(verify::verify_selberg_moment(lad, *k, *t)),
        Check::Gaplaw { t_list } => {
            let (r, tc) = verify::sweep(lad, SweepKind::GapLaw, t_list)?;
            Ok((r, tc))
        }
        Check::Lemma1(a) => one(verify::verify_lemma1(lad, a.t)),
    }
}

/// Writes reports and returns the exit code.
fn emit(cli: &Cli, json: bool, reports: &[VerificationReport], trend: Option<&TrendCheck>) -> Result<i32> {
    let mut out = open_out(cli)?;
    if json {
        for r in reports {
            writeln!(out, "{}", r.to_json()?)?;
        }
        if let Some(tc) = trend {
            let mut tc = tc.clone();
            tc.distances.iter_mut().for_each(|d| *d = crate::round_sig(*d));
            writeln!(out, "{}", serde_json::to_string(&tc)?)?;
        }
    } else {
        verify::write_csv(&mut out, reports)?;
        if let Some(tc) = trend {
            writeln!(out, "# trend {} pass={}", tc.name, tc.pass)?;
        }
    }
    out.flush()?;
    let failed = reports.iter().any(|r| r.failed()) || trend.is_some_and(|t| !t.pass);
    Ok(if failed { EXIT_FAILED } else { 0 })
}
