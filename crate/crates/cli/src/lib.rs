//! `specshift` command-line front end.
//!
//! Exit codes: `0` success, `1` invalid input, `2` a numerical check
//! failed (the results are still written).

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use specshift_core::eig::{dense_sym_eigenvalues, multiset_match};
use specshift_core::oracle::{build_truncated_sym_product, build_vk_operator, oracle_block_eigenvalues};
use specshift_core::shiftdiag::{
    certify_disk, classify_point_spectrum_shift_diag, disk_radius, estimate_norm_truncated,
    kernel_induction_solve, norm_bounds_adj, sample_disk, unweighted_disk_eigenvector_adaptive,
    Classification,
};
use specshift_core::spectrum::{closed_form_spectrum, point_spectrum, zero_multiplicity};
use specshift_core::weights::parse_weight_spec;
use specshift_core::{Kind, PointSpectrum, ProductKind, WeightSequence};

mod output;

use output::{floats, write_json, Csv, F};

#[derive(Debug, Parser)]
#[command(name = "specshift", version, about = "Point spectra of tensor products of weighted shifts")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Block spectra of S_w ⊙ S_w* (sym) or S_w ∧ S_w* (asym).
    Spectrum(SpectrumArgs),
    /// Exact spectra for the geometric weights w(i) = a^-i.
    ClosedForm(ClosedFormArgs),
    /// Compare block spectra with the brute-force truncation of V_k.
    OracleCheck(OracleArgs),
    /// Products of a weighted shift with a diagonal operator.
    #[command(subcommand)]
    ShiftDiag(ShiftDiagCommand),
}

#[derive(Debug, Args)]
struct WeightArg {
    /// Weight sequence: const:<c>, geom:<a>, dirichlet, bergman, kron:<i0>, file:<path>.
    #[arg(long)]
    weights: String,

    /// Read past the end of a file list as zeros instead of failing.
    #[arg(long)]
    zero_extend: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    weights: WeightArg,
    #[arg(long, default_value_t = Kind::Sym, value_parser = parse_kind)]
    kind: Kind,
    #[arg(long, default_value_t = 50)]
    kmax: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ClosedFormArgs {
    /// Base a >= 1.
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = Kind::Sym, value_parser = parse_kind)]
    kind: Kind,
    #[arg(long, default_value_t = 50)]
    kmax: usize,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    weights: WeightArg,
    #[arg(long, default_value_t = 50)]
    kmax: usize,
    /// Solver tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Largest allowed deviation between matched eigenvalues.
    #[arg(long, default_value_t = 1e-8)]
    match_tol: f64,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Shift weights α.
    #[arg(long)]
    alpha: String,
    /// Diagonal entries μ.
    #[arg(long)]
    mu: String,
    /// Read past the end of a file list as zeros instead of failing.
    #[arg(long)]
    zero_extend: bool,
}

#[derive(Debug, Subcommand)]
enum ShiftDiagCommand {
    /// Point spectrum of S_α ⊙ M on the truncation i <= j <= N.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "n", default_value_t = 120)]
        n: usize,
    },
    /// Bounds on ‖S_α* ⊙ M‖ and a Krylov estimate on the truncation.
    NormBounds {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "n", default_value_t = 120)]
        n: usize,
        /// Products with A*A spent on the estimate.
        #[arg(long, default_value_t = 400)]
        iters: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Certify sampled eigenvalues of S_α* ⊙ M inside the disk.
    DiskCheck {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Samples are drawn from the disk of radius safety·r.
        #[arg(long, default_value_t = 0.95)]
        safety: f64,
        #[arg(long, default_value_t = 400)]
        max_order: usize,
        /// Geometric means scanned when no closed-form infimum is known.
        #[arg(long, default_value_t = 1000)]
        scan: usize,
    },
    /// Eigenvectors e_λ ⊗ e_λ of S* ⊙ I for |λ| < 1.
    #[command(name = "example-43")]
    Example43 {
        /// λ as `re` or `re,im`; repeatable.
        #[arg(long = "lambda", value_parser = parse_complex, allow_hyphen_values = true)]
        lambdas: Vec<Complex64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long = "max-n", default_value_t = 2000)]
        max_n: usize,
    },
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse::<Kind>().map_err(|e| e.to_string())
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',');
    let mut next = |name: &str| -> Result<Option<f64>, String> {
        parts
            .next()
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad {name} part: {e}")))
            .transpose()
    };
    let re = next("real")?.ok_or("empty value")?;
    let im = next("imaginary")?.unwrap_or(0.0);
    if parts.next().is_some() {
        return Err("expected re or re,im".into());
    }
    Ok(Complex64::new(re, im))
}

/// Why a run stopped short of exit code 0.
enum Failure {
    Invalid(String),
    Check(String),
}

impl From<specshift_core::Error> for Failure {
    fn from(e: specshift_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("write failed: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn weights(spec: &str, zero_extend: bool) -> Result<WeightSequence, Failure> {
    let w = parse_weight_spec(spec)?;
    Ok(if zero_extend { w.zero_extended() } else { w })
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                let mut w = BufWriter::new(f);
                let r = dispatch(&cli, &mut w);
                r.and_then(|()| w.flush().map_err(Failure::from))
            }
            Err(e) => Err(Failure::Invalid(format!("{}: {e}", path.display()))),
        },
        None => dispatch(&cli, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Spectrum(a) => spectrum(a, fmt, out),
        Command::ClosedForm(a) => closed_form(a, fmt, out),
        Command::OracleCheck(a) => oracle_check(a, fmt, out),
        Command::ShiftDiag(c) => match c {
            ShiftDiagCommand::Classify { pair, n } => classify(pair, *n, fmt, out),
            ShiftDiagCommand::NormBounds {
                pair,
                n,
                iters,
                seed,
            } => norm_bounds(pair, *n, *iters, *seed, fmt, out),
            ShiftDiagCommand::DiskCheck {
                pair,
                samples,
                tol,
                seed,
                safety,
                max_order,
                scan,
            } => disk_check(
                pair,
                DiskOptions {
                    samples: *samples,
                    tol: *tol,
                    seed: *seed,
                    safety: *safety,
                    max_order: *max_order,
                    scan: *scan,
                },
                fmt,
                out,
            ),
            ShiftDiagCommand::Example43 { lambdas, tol, max_n } => {
                example_43(lambdas, *tol, *max_n, fmt, out)
            }
        },
    }
}

#[derive(Serialize)]
struct BlockOut {
    k: usize,
    kind: &'static str,
    dim: usize,
    eigenvalues: Vec<F>,
}

#[derive(Serialize)]
struct SpectrumMeta {
    command: &'static str,
    source: String,
    kind: &'static str,
    kmax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<F>,
    eigenvalue_count: usize,
    zero_count: usize,
    tail_bound: Option<F>,
}

#[derive(Serialize)]
struct SpectrumOut {
    blocks: Vec<BlockOut>,
    meta: SpectrumMeta,
}

fn write_spectrum(s: &PointSpectrum, meta: SpectrumMeta, fmt: Format, out: &mut dyn Write) -> Outcome {
    match fmt {
        Format::Json => {
            let blocks = s
                .blocks
                .iter()
                .map(|b| BlockOut {
                    k: b.block.k,
                    kind: b.block.kind.as_str(),
                    dim: b.block.dim,
                    eigenvalues: floats(&b.eigenvalues),
                })
                .collect();
            write_json(out, &SpectrumOut { blocks, meta })?;
        }
        Format::Csv => {
            let mut csv = Csv::new(out, &["k", "j", "value"])?;
            for b in &s.blocks {
                for (j, v) in b.eigenvalues.iter().enumerate() {
                    csv.row(&[b.block.k.to_string(), (j + 1).to_string(), F(*v).text()])?;
                }
            }
        }
    }
    Ok(())
}

/// Relative zero tolerance used for the reported kernel count.
const ZERO_TOL: f64 = 1e-12;

fn spectrum(a: &SpectrumArgs, fmt: Format, out: &mut dyn Write) -> Outcome {
    check_tol(a.tol)?;
    let w = weights(&a.weights.weights, a.weights.zero_extend)?;
    let s = point_spectrum(a.kind, &w, a.kmax, a.tol)?;
    let ms = s.multiset();
    let meta = SpectrumMeta {
        command: "spectrum",
        source: w.to_string(),
        kind: a.kind.as_str(),
        kmax: a.kmax,
        tol: Some(F(a.tol)),
        eigenvalue_count: ms.len(),
        zero_count: zero_multiplicity(&ms, ZERO_TOL),
        tail_bound: s.tail_bound.map(F),
    };
    write_spectrum(&s, meta, fmt, out)
}

fn closed_form(a: &ClosedFormArgs, fmt: Format, out: &mut dyn Write) -> Outcome {
    let s = closed_form_spectrum(a.a, a.kind, a.kmax)?;
    let ms = s.multiset();
    let meta = SpectrumMeta {
        command: "closed-form",
        source: format!("geom:{}", a.a),
        kind: a.kind.as_str(),
        kmax: a.kmax,
        tol: None,
        eigenvalue_count: ms.len(),
        zero_count: zero_multiplicity(&ms, ZERO_TOL),
        tail_bound: s.tail_bound.map(F),
    };
    write_spectrum(&s, meta, fmt, out)
}

#[derive(Serialize)]
struct CheckRow {
    k: usize,
    /// `sym`, `asym`, or `union` for sym ⊎ asym against all of V_k.
    kind: &'static str,
    dim: usize,
    max_deviation: F,
    matched: bool,
}

#[derive(Serialize)]
struct OracleMeta {
    command: &'static str,
    source: String,
    kmax: usize,
    tol: F,
    match_tol: F,
    union_tol: F,
    all_matched: bool,
}

#[derive(Serialize)]
struct OracleOut {
    checks: Vec<CheckRow>,
    meta: OracleMeta,
}

/// Tolerance for sym ⊎ asym against the undecomposed V_k.
const UNION_TOL: f64 = 1e-9;

fn oracle_check(a: &OracleArgs, fmt: Format, out: &mut dyn Write) -> Outcome {
    check_tol(a.tol)?;
    check_tol(a.match_tol)?;
    let w = weights(&a.weights.weights, a.weights.zero_extend)?;
    let sym = point_spectrum(Kind::Sym, &w, a.kmax, a.tol)?;
    let asym = point_spectrum(Kind::Asym, &w, a.kmax, a.tol)?;
    let mut checks = Vec::new();
    for k in 0..=a.kmax {
        let mut union = Vec::new();
        for s in [&sym, &asym] {
            let Some(b) = s.block(k) else { continue };
            let oracle = oracle_block_eigenvalues(b.block.kind, k, &w, a.tol)?;
            let r = multiset_match(&b.eigenvalues, &oracle, a.match_tol);
            checks.push(CheckRow {
                k,
                kind: b.block.kind.as_str(),
                dim: b.block.dim,
                max_deviation: F(r.max_deviation),
                matched: r.matched,
            });
            union.extend_from_slice(&b.eigenvalues);
        }
        union.sort_by(f64::total_cmp);
        let m = build_vk_operator(k, &w)?
            .to_dense_real()
            .ok_or_else(|| Failure::Check("V_k operator is not real".into()))?;
        let full = dense_sym_eigenvalues(&m, a.tol)?;
        let r = multiset_match(&union, &full, UNION_TOL);
        checks.push(CheckRow {
            k,
            kind: "union",
            dim: k + 1,
            max_deviation: F(r.max_deviation),
            matched: r.matched,
        });
    }
    let bad = checks.iter().filter(|c| !c.matched).count();
    let all_matched = bad == 0;
    match fmt {
        Format::Json => write_json(
            out,
            &OracleOut {
                meta: OracleMeta {
                    command: "oracle-check",
                    source: w.to_string(),
                    kmax: a.kmax,
                    tol: F(a.tol),
                    match_tol: F(a.match_tol),
                    union_tol: F(UNION_TOL),
                    all_matched,
                },
                checks,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(out, &["k", "kind", "dim", "max_deviation", "matched"])?;
            for c in &checks {
                csv.row(&[
                    c.k.to_string(),
                    c.kind.to_string(),
                    c.dim.to_string(),
                    c.max_deviation.text(),
                    c.matched.to_string(),
                ])?;
            }
        }
    }
    if all_matched {
        Ok(())
    } else {
        Err(Failure::Check(format!("{bad} block comparisons disagree")))
    }
}

fn pair(p: &PairArgs) -> Result<(WeightSequence, WeightSequence), Failure> {
    Ok((weights(&p.alpha, p.zero_extend)?, weights(&p.mu, p.zero_extend)?))
}

#[derive(Serialize)]
struct ClassifyOut {
    command: &'static str,
    alpha: String,
    mu: String,
    n: usize,
    classification: &'static str,
    witness: Option<usize>,
    forced: usize,
    last_claimed_row: usize,
}

fn classify(p: &PairArgs, n: usize, fmt: Format, out: &mut dyn Write) -> Outcome {
    let (alpha, mu) = pair(p)?;
    let class = classify_point_spectrum_shift_diag(&alpha, &mu, n)?;
    let report = kernel_induction_solve(&alpha, &mu, Complex64::new(0.0, 0.0), n)?;
    let (classification, witness) = match class {
        Classification::ContainsZero { witness } => ("contains-zero", Some(witness)),
        Classification::EmptyWithinTruncation => ("empty-within-truncation", None),
    };
    let o = ClassifyOut {
        command: "shift-diag classify",
        alpha: alpha.to_string(),
        mu: mu.to_string(),
        n,
        classification,
        witness,
        forced: report.forced.len(),
        last_claimed_row: report.last_claimed_row(),
    };
    match fmt {
        Format::Json => write_json(out, &o)?,
        Format::Csv => {
            let mut csv = Csv::new(out, &["classification", "witness", "n", "forced", "last_claimed_row"])?;
            csv.row(&[
                o.classification.to_string(),
                o.witness.map_or(String::new(), |w| w.to_string()),
                n.to_string(),
                o.forced.to_string(),
                o.last_claimed_row.to_string(),
            ])?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct NormOut {
    command: &'static str,
    alpha: String,
    mu: String,
    n: usize,
    lower: F,
    lower_witness: Option<usize>,
    upper: F,
    upper_is_estimate: bool,
    estimate: F,
    iters: usize,
    seed: u64,
}

fn norm_bounds(
    p: &PairArgs,
    n: usize,
    iters: usize,
    seed: u64,
    fmt: Format,
    out: &mut dyn Write,
) -> Outcome {
    let (alpha, mu) = pair(p)?;
    if n == 0 || iters == 0 {
        return Err(Failure::Invalid("n and iters must be positive".into()));
    }
    let bounds = norm_bounds_adj(&alpha, &mu, n);
    let op = build_truncated_sym_product(ProductKind::AdjShiftDiag, &alpha, &mu, n)?;
    let estimate = estimate_norm_truncated(&op, iters, seed);
    let o = NormOut {
        command: "shift-diag norm-bounds",
        alpha: alpha.to_string(),
        mu: mu.to_string(),
        n,
        lower: F(bounds.lower),
        lower_witness: bounds.lower_witness,
        upper: F(bounds.upper),
        upper_is_estimate: bounds.upper_is_estimate(),
        estimate: F(estimate),
        iters,
        seed,
    };
    match fmt {
        Format::Json => write_json(out, &o)?,
        Format::Csv => {
            let mut csv = Csv::new(
                out,
                &["lower", "lower_witness", "upper", "upper_is_estimate", "estimate"],
            )?;
            csv.row(&[
                o.lower.text(),
                o.lower_witness.map_or(String::new(), |w| w.to_string()),
                o.upper.text(),
                o.upper_is_estimate.to_string(),
                o.estimate.text(),
            ])?;
        }
    }
    // Compression never increases the norm, so the estimate must respect
    // the upper bound; the lower bound needs the witness inside the window.
    if estimate > bounds.upper + 1e-8 {
        return Err(Failure::Check(format!(
            "estimate {estimate} exceeds the upper bound {}",
            bounds.upper
        )));
    }
    Ok(())
}

struct DiskOptions {
    samples: usize,
    tol: f64,
    seed: u64,
    safety: f64,
    max_order: usize,
    scan: usize,
}

#[derive(Serialize)]
struct CertOut {
    index: usize,
    lambda_re: F,
    lambda_im: F,
    modulus: F,
    beta: Option<F>,
    order: Option<usize>,
    residual: Option<F>,
    accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct DiskMeta {
    command: &'static str,
    alpha: String,
    mu: String,
    radius: F,
    radius_is_estimate: bool,
    zero_eigenvalue: bool,
    sample_radius: F,
    samples: usize,
    accepted: usize,
    tol: F,
    seed: u64,
    max_order: usize,
}

#[derive(Serialize)]
struct DiskOut {
    certificates: Vec<CertOut>,
    meta: DiskMeta,
}

fn disk_check(p: &PairArgs, o: DiskOptions, fmt: Format, out: &mut dyn Write) -> Outcome {
    let (alpha, mu) = pair(p)?;
    check_tol(o.tol)?;
    if !(o.safety > 0.0 && o.safety < 1.0) {
        return Err(Failure::Invalid(format!("safety must lie in (0, 1), got {}", o.safety)));
    }
    let r = disk_radius(&alpha, &mu, o.scan.max(1))?;
    let sample_radius = o.safety * r.radius;
    let lambdas = if r.radius > 0.0 {
        sample_disk(sample_radius, o.samples, o.seed)
    } else {
        Vec::new()
    };
    let results = certify_disk(&alpha, &mu, &lambdas, o.tol, o.max_order);
    let certificates: Vec<CertOut> = lambdas
        .iter()
        .zip(&results)
        .enumerate()
        .map(|(index, (l, res))| {
            let base = CertOut {
                index,
                lambda_re: F(l.re),
                lambda_im: F(l.im),
                modulus: F(l.norm()),
                beta: None,
                order: None,
                residual: None,
                accepted: false,
                error: None,
            };
            match res {
                Ok(c) => CertOut {
                    beta: Some(F(c.beta)),
                    order: Some(c.order),
                    residual: Some(F(c.residual)),
                    accepted: c.beta < 1.0 && c.residual <= o.tol,
                    ..base
                },
                Err(e) => CertOut {
                    error: Some(e.to_string()),
                    ..base
                },
            }
        })
        .collect();
    let accepted = certificates.iter().filter(|c| c.accepted).count();
    let total = certificates.len();
    match fmt {
        Format::Json => write_json(
            out,
            &DiskOut {
                certificates,
                meta: DiskMeta {
                    command: "shift-diag disk-check",
                    alpha: alpha.to_string(),
                    mu: mu.to_string(),
                    radius: F(r.radius),
                    radius_is_estimate: r.is_estimate,
                    zero_eigenvalue: r.zero_eigenvalue,
                    sample_radius: F(sample_radius),
                    samples: total,
                    accepted,
                    tol: F(o.tol),
                    seed: o.seed,
                    max_order: o.max_order,
                },
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(
                out,
                &["index", "lambda_re", "lambda_im", "modulus", "beta", "order", "residual", "accepted"],
            )?;
            for c in &certificates {
                csv.row(&[
                    c.index.to_string(),
                    c.lambda_re.text(),
                    c.lambda_im.text(),
                    c.modulus.text(),
                    c.beta.map_or(String::new(), F::text),
                    c.order.map_or(String::new(), |j| j.to_string()),
                    c.residual.map_or(String::new(), F::text),
                    c.accepted.to_string(),
                ])?;
            }
        }
    }
    if accepted == total {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} of {total} certificates rejected", total - accepted)))
    }
}

#[derive(Serialize)]
struct UnweightedOut {
    lambda_re: F,
    lambda_im: F,
    modulus: F,
    n: Option<usize>,
    residual: Option<F>,
    accepted: bool,
    outside_half_disk: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct Example43Out {
    eigenvectors: Vec<UnweightedOut>,
    meta: Example43Meta,
}

#[derive(Serialize)]
struct Example43Meta {
    command: &'static str,
    tol: F,
    max_n: usize,
    half_disk_radius: F,
}

fn example_43(lambdas: &[Complex64], tol: f64, max_n: usize, fmt: Format, out: &mut dyn Write) -> Outcome {
    check_tol(tol)?;
    let defaults = [
        Complex64::new(0.9, 0.0),
        Complex64::from_polar(0.9, 2.0 * PI / 7.0),
    ];
    let lambdas = if lambdas.is_empty() { &defaults[..] } else { lambdas };
    let rows: Vec<UnweightedOut> = lambdas
        .iter()
        .map(|&l| {
            let base = UnweightedOut {
                lambda_re: F(l.re),
                lambda_im: F(l.im),
                modulus: F(l.norm()),
                n: None,
                residual: None,
                accepted: false,
                outside_half_disk: l.norm() >= 0.5,
                error: None,
            };
            match unweighted_disk_eigenvector_adaptive(l, tol, max_n) {
                Ok((_, residual, n)) => UnweightedOut {
                    n: Some(n),
                    residual: Some(F(residual)),
                    accepted: residual <= tol,
                    ..base
                },
                Err(e) => UnweightedOut {
                    error: Some(e.to_string()),
                    ..base
                },
            }
        })
        .collect();
    if let Some(bad) = rows.iter().find(|r| r.error.is_some() && r.modulus.0 >= 1.0) {
        return Err(Failure::Invalid(format!(
            "|λ| = {} is not below 1",
            bad.modulus.0
        )));
    }
    let accepted = rows.iter().all(|r| r.accepted);
    match fmt {
        Format::Json => write_json(
            out,
            &Example43Out {
                eigenvectors: rows,
                meta: Example43Meta {
                    command: "shift-diag example-43",
                    tol: F(tol),
                    max_n,
                    half_disk_radius: F(0.5),
                },
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(
                out,
                &["lambda_re", "lambda_im", "modulus", "n", "residual", "accepted", "outside_half_disk"],
            )?;
            for r in &rows {
                csv.row(&[
                    r.lambda_re.text(),
                    r.lambda_im.text(),
                    r.modulus.text(),
                    r.n.map_or(String::new(), |n| n.to_string()),
                    r.residual.map_or(String::new(), F::text),
                    r.accepted.to_string(),
                    r.outside_half_disk.to_string(),
                ])?;
            }
        }
    }
    if accepted {
        Ok(())
    } else {
        Err(Failure::Check("an eigenvector failed its residual check".into()))
    }
}
