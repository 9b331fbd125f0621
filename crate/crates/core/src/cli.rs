//! The `chaos-lab` command line.
//!
//! Exit codes: `0` success, `1` verdict failure, `2` input error,
//! `3` resource limit exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::chaos_sim::{
    sample_chaos, summarize, write_samples_le, BinSpec, ChaosSpec, SampleReport,
    SimulationOptions, ZStatus, DEFAULT_TERM_BOUND,
};
use crate::error::Error;
use crate::exact_poly::{format_rational, parse_rational, DensePolynomial, Rational};
use crate::moment_forms::{certify, read_moments_file, Certificate, ScalarValue};
use crate::verify::{verify_paper, VerifyOptions};
use crate::wfamily::{expand_in_w, t_kl_poly, t_poly, w_poly, ExpansionReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "chaos-lab", version, about = "Exact W-family algebra, moment certificates and chaos simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand an even polynomial over the W-family.
    Expand(ExpandArgs),
    /// Certify a moment sequence against the matrix and inequality tests.
    Certify(CertifyArgs),
    /// Sample a chaos element and compare with exact moments.
    Simulate(SimulateArgs),
    /// Run the verification suite.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Format {
    /// Machine-readable JSON output.
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Aligned text output (default).
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "target")]
pub struct ExpandTarget {
    /// `T_k = x^{2k} - k(2k-1)!! x² + (k-1)(2k-1)!!`.
    #[arg(long, value_name = "K")]
    pub tk: Option<usize>,
    /// `T_{k,l} = x^{2l} + α x^{2k} + β`.
    #[arg(long, num_args = 2, value_names = ["K", "L"])]
    pub tkl: Option<Vec<usize>>,
    /// Coefficients from the constant term up, comma separated, e.g. `3,0,-6,0,1`.
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// `W_k` itself.
    #[arg(long, value_name = "K")]
    pub w: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub target: ExpandTarget,
    #[command(flatten)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Moment file: `.json`, or CSV with one value per line.
    #[arg(long, value_name = "FILE")]
    pub moments: PathBuf,
    /// Matrix order; defaults to the largest the file supports.
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Chaos spec JSON file.
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, env = "CHAOS_LAB_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Highest empirical moment order.
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
    /// Estimate the total-variation distance to N(0,1).
    #[arg(long)]
    pub dtv: bool,
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    #[arg(long, default_value_t = 6.0)]
    pub range: f64,
    /// Cap on product-Hermite terms in the exact oracle.
    #[arg(long, default_value_t = DEFAULT_TERM_BOUND)]
    pub term_bound: usize,
    /// Skip the exact oracle.
    #[arg(long)]
    pub no_oracle: bool,
    /// Write raw samples as little-endian f64.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Exact checks only (default).
    #[arg(long, conflicts_with = "full")]
    pub quick: bool,
    /// Exact checks plus Monte Carlo checks.
    #[arg(long)]
    pub full: bool,
    #[arg(long, env = "CHAOS_LAB_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Monte Carlo sample size for `--full`.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    #[arg(long, default_value_t = 6.0)]
    pub range: f64,
    /// Include per-criterion wall-clock times (breaks byte-identical output).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub format: Format,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "chaos-lab: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Invariant(_) => EXIT_VERDICT,
        Error::Domain(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => EXIT_INPUT,
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> crate::Result<i32> {
    match command {
        Command::Expand(a) => cmd_expand(a, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::VerifyPaper(a) => cmd_verify(a, out),
    }
}

fn emit_json<T: Serialize>(value: &T, out: &mut dyn Write) -> crate::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// `"3,0,-6,0,1"` as coefficients of `1, x, x², ...`.
pub fn parse_coefficients(text: &str) -> crate::Result<DensePolynomial> {
    let coeffs = text
        .split(',')
        .map(parse_rational)
        .collect::<crate::Result<Vec<Rational>>>()?;
    Ok(DensePolynomial::new(coeffs))
}

fn cmd_expand(a: &ExpandArgs, out: &mut dyn Write) -> crate::Result<i32> {
    let t = &a.target;
    let (label, poly) = if let Some(k) = t.tk {
        (format!("T_{k}"), t_poly(k)?)
    } else if let Some(kl) = &t.tkl {
        let d = t_kl_poly(kl[0], kl[1])?;
        (format!("T_{{{},{}}}", kl[0], kl[1]), d.poly)
    } else if let Some(k) = t.w {
        (format!("W_{k}"), w_poly(k)?)
    } else {
        let text = t.poly.as_deref().expect("clap enforces one target");
        ("P".to_string(), parse_coefficients(text)?)
    };
    let expansion = expand_in_w(&poly)?;
    let report = ExpansionReport::new(&poly, &expansion);
    if a.format.json {
        #[derive(Serialize)]
        struct Labeled<'a> {
            label: &'a str,
            #[serde(flatten)]
            report: &'a ExpansionReport,
        }
        emit_json(&Labeled { label: &label, report: &report }, out)?;
    } else {
        let mut terms: Vec<String> = expansion
            .coeffs
            .iter()
            .rev()
            .map(|(k, c)| {
                let c = format_rational(c);
                if c == "1" {
                    format!("W_{k}")
                } else {
                    format!("{c}·W_{k}")
                }
            })
            .collect();
        for (c, x) in [(&expansion.residual_a, "x^2"), (&expansion.residual_b, "1")] {
            if !num_traits::Zero::is_zero(c) {
                terms.push(format!("{}·{x}", format_rational(c)));
            }
        }
        let rhs = if terms.is_empty() { "0".into() } else { terms.join(" + ").replace("+ -", "- ") };
        writeln!(out, "{label} = {poly}")?;
        writeln!(out, "{} = {rhs}", " ".repeat(label.chars().count()))?;
        if report.in_family {
            writeln!(out, "in family: yes")?;
        } else {
            writeln!(
                out,
                "in family: no (negative coefficients on W_{:?}; residual {} x^2 + {})",
                report.negative_indices, report.residual[0], report.residual[1]
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> crate::Result<i32> {
    let ms = read_moments_file(&a.moments)?;
    let k = a.k.unwrap_or_else(|| ms.max_matrix_order());
    if k == 0 {
        return Err(Error::domain("moment file must contain at least m_2"));
    }
    let cert = certify(&ms, k)?;
    if a.format.json {
        emit_json(&cert, out)?;
    } else {
        write_certificate(&cert, out)?;
    }
    Ok(if cert.all_hold() { EXIT_OK } else { EXIT_VERDICT })
}

fn show(v: &ScalarValue) -> String {
    v.exact.clone().unwrap_or_else(|| format!("{:.6e}", v.float))
}

fn write_certificate(cert: &Certificate<Rational>, out: &mut dyn Write) -> crate::Result<()> {
    use crate::moment_forms::MomentScalar;
    let k = cert.matrix.order();
    writeln!(out, "M_{k}:")?;
    let cells: Vec<Vec<String>> = cert
        .matrix
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| show(&v.value())).collect())
        .collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    for row in &cells {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        writeln!(out, "  [ {} ]", row.join("  "))?;
    }
    let minors: Vec<String> = cert.leading_minors.iter().map(format_rational).collect();
    writeln!(
        out,
        "leading minors: {}  ({})",
        minors.join(", "),
        if cert.minors_nonnegative { "all >= 0" } else { "NEGATIVE" }
    )?;
    writeln!(
        out,
        "det M_{k} = {}",
        format_rational(cert.leading_minors.last().expect("non-empty"))
    )?;
    writeln!(
        out,
        "min eigenvalue: {:.6e}  (tolerance {:.1e}, {})",
        cert.eigen.min_eigenvalue,
        cert.eigen.tolerance,
        if cert.eigen.psd { "psd" } else { "not psd" }
    )?;
    for v in &cert.inequalities {
        writeln!(
            out,
            "{:<4} {:<15} {:<28} lhs {}  rhs {}  slack {}",
            if v.holds { "ok" } else { "FAIL" },
            v.name,
            v.statement,
            format_rational(&v.lhs),
            format_rational(&v.rhs),
            format_rational(&v.slack)
        )?;
    }
    for (j, w) in &cert.expected_w {
        writeln!(out, "E[W_{j}(X)] = {}", format_rational(w))?;
    }
    if let Some(k6) = &cert.kappa6 {
        writeln!(out, "kappa6 = {}", format_rational(k6))?;
    }
    writeln!(out, "verdict: {}", if cert.all_hold() { "PASS" } else { "FAIL" })?;
    Ok(())
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> crate::Result<i32> {
    let spec = ChaosSpec::read_file(&a.spec)?;
    let opts = SimulationOptions {
        max_order: a.max_order,
        dtv: if a.dtv { Some(BinSpec::new(a.bins, a.range)?) } else { None },
        oracle: !a.no_oracle,
        term_bound: a.term_bound,
    };
    // fail on the oracle budget before spending time on sampling
    if opts.oracle {
        spec.oracle_moments_bounded(opts.max_order, opts.term_bound)?;
    }
    let samples = sample_chaos(&spec, a.n, a.seed)?;
    if let Some(path) = &a.out {
        write_samples_le(&samples, std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    let report = summarize(&spec, &samples, a.seed, &opts)?;
    if a.format.json {
        emit_json(&report, out)?;
    } else {
        write_sample_report(&report, out)?;
    }
    Ok(if report.worst_status() == ZStatus::Fail { EXIT_VERDICT } else { EXIT_OK })
}

fn write_sample_report(r: &SampleReport, out: &mut dyn Write) -> crate::Result<()> {
    writeln!(out, "{}", r.description)?;
    writeln!(out, "n = {}, seed = {}, rng = {}, normals = {}", r.n, r.seed, r.rng, r.normal_method)?;
    writeln!(
        out,
        "{:>5}  {:>14}  {:>12}  {:>16}  {:>8}  status",
        "order", "empirical", "SE", "exact", "z"
    )?;
    match &r.oracle {
        Some(checks) => {
            for c in checks {
                let exact = c.exact.clone().unwrap_or_else(|| format!("{:.8}", c.expected));
                writeln!(
                    out,
                    "{:>5}  {:>14.6}  {:>12.3e}  {:>16}  {:>+8.2}  {}",
                    c.order,
                    c.empirical,
                    c.standard_error,
                    exact,
                    c.z,
                    match c.status {
                        ZStatus::Pass => "pass",
                        ZStatus::Flag => "flag",
                        ZStatus::Fail => "FAIL",
                    }
                )?;
            }
        }
        None => {
            for m in &r.moments {
                writeln!(out, "{:>5}  {:>14.6}  {:>12.3e}", m.order, m.estimate, m.standard_error)?;
            }
        }
    }
    if let Some(d) = &r.dtv {
        writeln!(
            out,
            "d_TV estimate: {:.6}  ({} bins on [-{}, {}) plus tails)",
            d.estimate, d.bins.bins, d.bins.range, d.bins.range
        )?;
        for b in &r.tv_bounds {
            writeln!(
                out,
                "  k={}: bound {:.6}  {}",
                b.k,
                b.bound,
                if d.estimate <= b.bound { "estimate below bound" } else { "estimate ABOVE bound" }
            )?;
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> crate::Result<i32> {
    let opts = VerifyOptions {
        full: a.full,
        seed: a.seed,
        samples: a.n,
        bins: BinSpec::new(a.bins, a.range)?,
        timings: a.timings,
    };
    let report = verify_paper(&opts);
    if a.format.json {
        emit_json(&report, out)?;
    } else {
        out.write_all(report.render_table().as_bytes())?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_VERDICT })
}
