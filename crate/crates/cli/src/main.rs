//! `n4char`: character expansions, parameter tables, identity suites and
//! modular certificates.
//!
//! Exit status is 0 on success, 1 when a check fails, 2 on usage errors.

mod cache;
mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use n4char::characters::{character_series, CharacterSpec, Sector, Sign};
use n4char::modular::{span_closure, t_phase_deviation, NumericPoint, Transform, DEFAULT_PRECISION_BITS};
use n4char::psi::Point;
use n4char::rational::{fmt_q, parse_q};
use n4char::suites::{run_suite, Config, Status, SuiteReport, SUITES};
use n4char::{Error, XWindow, Q};

use cache::Cache;

#[derive(Parser)]
#[command(name = "n4char", version, about = "Characters of N=4 superconformal algebras from quantum Hamiltonian reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expand one character as a q-series, each q-level in descending powers of x.
    Expand {
        #[arg(long = "M", value_name = "M")]
        m: i64,
        /// Index j, e.g. 1/2, -3/2, 0.
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        /// NS or R.
        #[arg(long)]
        sector: String,
        /// + (character) or - (supercharacter).
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        /// Strict upper bound on q-exponents, as p/q.
        #[arg(long, default_value = "8")]
        q_order: String,
        /// Trusted x-exponent range LO,HI.
        #[arg(long, default_value = "-8,8", allow_hyphen_values = true)]
        x_window: String,
        #[arg(long, value_enum, default_value = "json")]
        format: SeriesFormat,
        /// Skip the expansion cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Nice-case parameters (j, heart, k1, k2, c, h, s) for a range of M.
    Table {
        /// A single M or a range such as 1..4.
        #[arg(long = "M", value_name = "RANGE")]
        m: String,
        /// Ramond-twisted rows instead of NS.
        #[arg(long)]
        twisted: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Run identity suites.
    Verify {
        /// theta, psi, characters, reduction, modular or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "8")]
        q_order: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Working precision in bits (absolute error 2^-bits).
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: SeriesFormat,
    },
    /// Certify that the S or T image of a character family lies in its span.
    Transform {
        #[arg(long = "M", value_name = "M")]
        m: i64,
        /// S or T.
        #[arg(long)]
        which: String,
        /// 1: characters, supercharacters and twisted characters; 2: twisted supercharacters.
        #[arg(long, default_value_t = 1)]
        statement: u8,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision: u32,
        /// JSON file of sample points [[Re tau, Im tau, Re z, Im z], ...].
        #[arg(long)]
        points: Option<PathBuf>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::InvalidParameter(_) | Error::Parse(_)) => Failure::Usage(e),
            _ => Failure::Check(e),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow::anyhow!(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn rational(flag: &str, s: &str) -> Result<Q, Failure> {
    parse_q(s).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Expand { m, j, sector, sign, q_order, x_window, format, no_cache } => {
            let j = rational("j", &j)?;
            let sector: Sector = sector.parse().map_err(|e: Error| usage(e.to_string()))?;
            let sign: Sign = sign.parse().map_err(|e: Error| usage(e.to_string()))?;
            let order = rational("q-order", &q_order)?;
            let window = parse_window(&x_window)?;
            let spec = CharacterSpec::new(m, j, sector, sign).map_err(|e| usage(e.to_string()))?;
            let series = expand(&spec, order, window, no_cache)?;
            match format {
                SeriesFormat::Json => emit(&(series.to_json() + "\n")),
                SeriesFormat::Text => emit(&render::series_text(&series)),
            }
            Ok(true)
        }
        Command::Table { m, twisted, format } => {
            let (lo, hi) = parse_range(&m)?;
            let rows = render::table_rows(lo..=hi, twisted).map_err(anyhow::Error::from)?;
            match format {
                TableFormat::Csv => emit(&render::table_csv(&rows)),
                TableFormat::Json => emit(&(serde_json::to_string_pretty(&rows).map_err(anyhow::Error::from)? + "\n")),
            }
            Ok(true)
        }
        Command::Verify { suite, q_order, tol, precision, format } => {
            let cfg = Config { q_order: rational("q-order", &q_order)?, tol, precision_bits: precision };
            let names: Vec<&str> = match suite.as_str() {
                "all" => SUITES.to_vec(),
                s if SUITES.contains(&s) => vec![s],
                s => return Err(usage(format!("unknown suite {s:?} (expected one of {}, all)", SUITES.join(", ")))),
            };
            let reports: Vec<SuiteReport> = names.iter().map(|n| run_suite(n, &cfg).expect("known suite")).collect();
            match format {
                SeriesFormat::Json => {
                    emit(&(serde_json::to_string_pretty(&reports).map_err(anyhow::Error::from)? + "\n"))
                }
                SeriesFormat::Text => {
                    for r in &reports {
                        print_report(r);
                    }
                }
            }
            Ok(reports.iter().all(SuiteReport::passed))
        }
        Command::Transform { m, which, statement, tol, precision, points, out } => {
            let which: Transform = which.parse().map_err(|e: Error| usage(e.to_string()))?;
            let pts = points.map(|p| read_points(&p)).transpose()?;
            let cert = match span_closure(m, statement, which, pts.as_deref(), tol, precision) {
                Err(Error::IllConditioned(c)) => {
                    return Err(Failure::Check(anyhow::anyhow!(
                        "family matrix is ill-conditioned (condition number {c:.2e}); try other sample points with --points"
                    )))
                }
                r => r.map_err(anyhow::Error::from)?,
            };
            let json = cert.to_json();
            match out {
                Some(path) => fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => emit(&(json + "\n")),
            }
            if let Some(dev) = t_phase_deviation(&cert).map_err(anyhow::Error::from)? {
                eprintln!("T coefficients deviate from the predicted phases by {dev:.2e}");
            }
            eprintln!("residual {:.3e} (tol {:.0e}): {}", cert.residual, cert.tol, if cert.passes { "pass" } else { "FAIL" });
            Ok(cert.passes)
        }
    }
}

fn expand(spec: &CharacterSpec, order: Q, window: XWindow, no_cache: bool) -> anyhow::Result<n4char::JacobiSeries> {
    let cache = if no_cache { None } else { cache::default_dir().map(Cache::new) };
    let key = Cache::key(&[
        "expand",
        &spec.m.to_string(),
        &fmt_q(&spec.j),
        &spec.sector.to_string(),
        &spec.sign.to_string(),
        &fmt_q(&order),
        &fmt_q(&window.lo),
        &fmt_q(&window.hi),
    ]);
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok(hit);
    }
    let series = character_series(spec, order, window)?;
    if let Some(c) = &cache {
        if let Err(e) = c.put(&key, &series) {
            eprintln!("warning: could not write cache in {}: {e}", c.dir().display());
        }
    }
    Ok(series)
}

fn parse_window(s: &str) -> Result<XWindow, Failure> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| usage(format!("--x-window expects LO,HI, got {s:?}")))?;
    let (lo, hi) = (rational("x-window", lo.trim())?, rational("x-window", hi.trim())?);
    XWindow::new(lo, hi).map_err(|e| usage(e.to_string()))
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| usage(format!("--M expects N or LO..HI, got {s:?}")));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (int(a)?, int(b.trim_start_matches('='))?),
        None => (int(s)?, int(s)?),
    };
    if lo < 1 || hi < lo {
        return Err(usage(format!("--M range must satisfy 1 <= LO <= HI, got {s:?}")));
    }
    Ok((lo, hi))
}

fn read_points(path: &PathBuf) -> Result<Vec<NumericPoint>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    let raw: Vec<[f64; 4]> =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: expected [[Re tau, Im tau, Re z, Im z], ...]: {e}", path.display())))?;
    Ok(raw.into_iter().map(|[a, b, c, d]| Point::diagonal(Complex64::new(a, b), Complex64::new(c, d))).collect())
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn print_report(r: &SuiteReport) {
    let mut text = String::new();
    for c in &r.cases {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        text += &format!("{tag} {}: {}: {}\n", r.suite, c.id, c.detail);
    }
    let failed = r.failures().count();
    text += &format!(
        "{}: {} cases, {failed} failed (q-order {}, tol {:e}, precision {} bits, {} ms)\n",
        r.suite,
        r.cases.len(),
        r.config.q_order,
        r.config.tol,
        r.config.precision_bits,
        r.wall_time_ms
    );
    emit(&text);
}
