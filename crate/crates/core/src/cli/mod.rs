//! Command-line front end. `run` is what the `ffcount` binary calls.
//!
//! Results go to stdout as one JSON object (or text with `--pretty`).
//! Exit codes: 0 on success, 1 on usage or syntax errors, 2 when a
//! mathematical precondition fails; failures print `{"error", "reason"}`
//! to stderr.

pub mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chars::{gauss_sum_numeric, CharError, MultChar};
use crate::counting::{
    brute_force_star, brute_force_total, count_full, count_full_forced, count_star_charsum, count_star_diagonal,
    count_star_diagonal_forced, count_star_gaussvec, Branch, CountError, CountResult, Method, SolutionSource,
    DEFAULT_BRUTE_FORCE_BUDGET, DEFAULT_GAUSSVEC_BUDGET,
};
use crate::gf::{FieldCtx, GfError};
use crate::poly::SparsePoly;
use crate::pure::{check_admissible, pure_gauss_sum, Classification, NotAdmissibleReason, ParityCase, PureError};
use crate::zn_linalg::{star_equivalent, EquivMethod, EquivOptions, LinalgError, NotEquivalentReason};

pub use parse::{parse_expr, parse_poly, parse_poly_with, ParseError, ParseOptions, PolyExpr};

/// Environment variable that overrides the enumeration budgets.
pub const BUDGET_ENV: &str = "FFCOUNT_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "ffcount", version, about = "Count solutions of polynomial equations over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long, conflicts_with = "field")]
    p: Option<u64>,
    /// Extension degree.
    #[arg(long, conflicts_with = "field")]
    m: Option<u32>,
    /// Modulus coefficients c0,...,cm (low degree first, monic).
    #[arg(long, conflicts_with = "field")]
    modulus: Option<String>,
    /// Shorthand "p,m" or "p,m,c0 c1 ... cm".
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Human-readable output instead of JSON.
    #[arg(long, conflicts_with = "json")]
    pretty: bool,
    /// JSON output (the default).
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// N(f) for a full polynomial via a diagonal witness, or by enumeration.
    Count {
        poly: String,
        /// Diagonal polynomial *-equivalent to POLY.
        #[arg(long)]
        diagonal_witness: Option<String>,
        /// Skip the equivalence and class checks; cross-checks by enumeration when affordable.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// N*(g), the number of solutions with every coordinate nonzero.
    CountStar {
        poly: String,
        #[arg(long, value_enum, default_value_t = StarMethod::Closed)]
        method: StarMethod,
        /// Fall back to numeric character sums when the closed form does not apply.
        #[arg(long)]
        numeric_fallback: bool,
        /// Skip the equal-class check; cross-checks by enumeration when affordable.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Admissibility of an exponent and the constants C1, C2.
    Classify {
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// *-equivalence of two polynomials.
    Equiv {
        f: String,
        g: String,
        /// Force the constant column on or off.
        #[arg(long)]
        include_constant_column: Option<bool>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gauss sum of the character of order d raised to the j-th power.
    Gauss {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        j: u64,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reference counts by enumeration or character sums.
    Oracle {
        poly: String,
        /// Count N* instead of N.
        #[arg(long)]
        star: bool,
        #[arg(long, value_enum, default_value_t = OracleMethod::Brute)]
        method: OracleMethod,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StarMethod {
    Closed,
    Charsum,
    Gaussvec,
    Brute,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleMethod {
    Brute,
    Gaussvec,
    Charsum,
}

/// A failed command: exit code, machine-readable reason, message.
#[derive(Debug)]
struct Failure {
    code: i32,
    reason: &'static str,
    message: String,
}

impl Failure {
    fn usage(reason: &'static str, message: impl Into<String>) -> Self {
        Failure { code: 1, reason, message: message.into() }
    }

    fn precondition(reason: &'static str, message: impl Into<String>) -> Self {
        Failure { code: 2, reason, message: message.into() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::usage("syntax", e.to_string())
    }
}

impl From<GfError> for Failure {
    fn from(e: GfError) -> Self {
        Failure::usage("invalid_field", e.to_string())
    }
}

fn pure_reason(e: &PureError) -> &'static str {
    match e {
        PureError::ExponentTooSmall(_) => "exponent_too_small",
        PureError::TrivialCharacter { .. } => "trivial_character",
        PureError::NotAdmissible { .. } => "not_admissible",
        PureError::Field(_) => "field",
    }
}

fn linalg_reason(e: &LinalgError) -> &'static str {
    match e {
        LinalgError::DifferentTermCounts(..) => "different_term_counts",
        LinalgError::MismatchedFields => "mismatched_fields",
        LinalgError::EmptyPolynomial => "no_terms",
        _ => "linear_algebra",
    }
}

impl From<PureError> for Failure {
    fn from(e: PureError) -> Self {
        Failure::precondition(pure_reason(&e), e.to_string())
    }
}

impl From<LinalgError> for Failure {
    fn from(e: LinalgError) -> Self {
        Failure::precondition(linalg_reason(&e), e.to_string())
    }
}

impl From<CharError> for Failure {
    fn from(e: CharError) -> Self {
        let reason = match e {
            CharError::OrderDoesNotDivide { .. } => "order_does_not_divide",
            CharError::ZeroOrder => "zero_order",
            CharError::Field(_) => "field",
        };
        Failure::precondition(reason, e.to_string())
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        let reason = match &e {
            CountError::NoTerms => "no_terms",
            CountError::NotDiagonal => "not_diagonal",
            CountError::NotFull => "not_full",
            CountError::RestrictionNotCountable { .. } => "restriction_not_countable",
            CountError::UnequalExponents(_) => "unequal_exponents",
            CountError::Pure(p) => pure_reason(p),
            CountError::CharacterClassesDiffer { .. } => "character_classes_differ",
            CountError::ConstantNonzero => "constant_nonzero",
            CountError::ConstantZero => "constant_zero",
            CountError::TooManyWitnessTerms { .. } => "too_many_witness_terms",
            CountError::NotStarEquivalent(_) => "not_star_equivalent",
            CountError::Linalg(l) => linalg_reason(l),
            CountError::BudgetExceeded { .. } => "budget_exceeded",
            CountError::ResidualExceeded { .. } => "residual_exceeded",
            CountError::Indivisible { .. } => "indivisible",
            CountError::Overflow => "overflow",
        };
        Failure::precondition(reason, e.to_string())
    }
}

fn parse_list(text: &str) -> Result<Vec<u64>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| Failure::usage("invalid_field", format!("'{s}' is not a non-negative integer"))))
        .collect()
}

fn build_field(args: &FieldArgs) -> Result<Arc<FieldCtx>, Failure> {
    let (p, m, modulus) = if let Some(shorthand) = &args.field {
        let mut parts = shorthand.splitn(3, ',');
        let mut num = |what: &str| -> Result<u64, Failure> {
            parts
                .next()
                .map(str::trim)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Failure::usage("invalid_field", format!("--field needs \"p,m[,c0 ... cm]\" (bad {what})")))
        };
        let p = num("p")?;
        let m = num("m")?;
        let modulus = parts.next().map(parse_list).transpose()?;
        (p, m, modulus)
    } else {
        let p = args.p.ok_or_else(|| Failure::usage("invalid_field", "give --p and --m, or --field"))?;
        let m = args.m.unwrap_or(1) as u64;
        (p, m, args.modulus.as_deref().map(parse_list).transpose()?)
    };
    let m = u32::try_from(m).map_err(|_| Failure::usage("invalid_field", "extension degree too large"))?;
    Ok(Arc::new(FieldCtx::new(p, m, modulus.as_deref())?))
}

fn budgets() -> Result<(u128, u128), Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => {
            let b = v
                .trim()
                .parse::<u128>()
                .map_err(|_| Failure::usage("invalid_budget", format!("{BUDGET_ENV}='{v}' is not a non-negative integer")))?;
            Ok((b, b))
        }
        Err(_) => Ok((DEFAULT_BRUTE_FORCE_BUDGET, DEFAULT_GAUSSVEC_BUDGET)),
    }
}

#[derive(Serialize)]
struct CountOutput {
    q: u64,
    n: usize,
    star: bool,
    count: u128,
    method: Method,
    branch: Option<Branch>,
    elapsed_ms: u64,
    approximate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    forced: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<Option<u128>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mismatch: Option<bool>,
}

impl CountOutput {
    fn new(f: &SparsePoly, r: CountResult, started: Instant) -> Self {
        CountOutput {
            q: f.ctx().q(),
            n: f.n_vars(),
            star: r.star,
            count: r.count,
            method: r.method,
            branch: r.branch,
            elapsed_ms: started.elapsed().as_millis() as u64,
            approximate: r.approximate,
            forced: None,
            brute_force: None,
            mismatch: None,
        }
    }

    /// Records an enumeration cross-check of a forced result.
    fn cross_check(&mut self, oracle: Result<CountResult, CountError>, warn: &mut dyn Write) -> Result<(), Failure> {
        let oracle = match oracle {
            Ok(r) => Some(r.count),
            Err(CountError::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        self.forced = Some(true);
        self.brute_force = Some(oracle);
        let mismatch = oracle.is_some_and(|c| c != self.count);
        self.mismatch = Some(mismatch);
        if mismatch {
            let _ = writeln!(
                warn,
                "warning: forced closed form gives {} but enumeration gives {}",
                self.count,
                oracle.unwrap_or_default()
            );
        } else if oracle.is_none() {
            let _ = writeln!(warn, "warning: forced result not cross-checked (enumeration over budget)");
        }
        Ok(())
    }

    fn pretty(&self) -> String {
        let symbol = if self.star { "N*" } else { "N" };
        let mut s = format!("{symbol} = {} over F_{} in {} variables ({}", self.count, self.q, self.n, label(&self.method));
        if let Some(b) = self.branch {
            s += &format!(", {}", label(&b));
        }
        s += ")";
        if self.approximate {
            s += " [approximate]";
        }
        if let Some(Some(c)) = self.brute_force {
            s += &format!(" [enumeration: {c}]");
        }
        s
    }
}

/// The JSON spelling of a unit enum variant.
fn label<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

#[derive(Serialize)]
struct ClassifyOutput {
    q: u64,
    d: u64,
    admissible: bool,
    r: Option<u32>,
    h: Option<u32>,
    case: Option<ParityCase>,
    #[serde(rename = "C1")]
    c1: Option<i64>,
    #[serde(rename = "C2")]
    c2: Option<i64>,
    reason: Option<NotAdmissibleReason>,
}

#[derive(Serialize)]
struct Certificate {
    f: Vec<Vec<u64>>,
    g: Vec<Vec<u64>>,
}

#[derive(Serialize)]
struct EquivOutput {
    equivalent: bool,
    method: EquivMethod,
    reason: Option<NotEquivalentReason>,
    constant_column: bool,
    certificate: Certificate,
}

#[derive(Serialize)]
struct GaussOutput {
    q: u64,
    d: u64,
    j: u64,
    re: f64,
    im: f64,
    abs: f64,
    degenerate: bool,
    closed_form: Option<i64>,
}

enum Report {
    Json(String),
    Text(String),
}

fn emit<T: Serialize>(value: &T, pretty_text: impl FnOnce() -> String, output: &OutputArgs) -> Report {
    if output.pretty {
        Report::Text(pretty_text())
    } else {
        Report::Json(serde_json::to_string(value).expect("output types serialize"))
    }
}

fn run_count(
    poly: &str,
    witness: Option<&str>,
    force: bool,
    field: &FieldArgs,
    output: &OutputArgs,
    warn: &mut dyn Write,
) -> Result<Report, Failure> {
    let ctx = build_field(field)?;
    let (brute_budget, _) = budgets()?;
    let f = parse_poly(poly, ctx.clone())?;
    let started = Instant::now();
    let out = match witness {
        Some(w) => {
            let g = parse_poly(w, ctx)?;
            if force {
                let r = count_full_forced(&f, &g)?;
                let mut out = CountOutput::new(&f, r, started);
                out.cross_check(brute_force_total(&f, brute_budget), warn)?;
                out
            } else {
                CountOutput::new(&f, count_full(&f, &g)?, started)
            }
        }
        None if f.is_full() => {
            return Err(Failure::precondition(
                "witness_required",
                "full polynomials need --diagonal-witness (use `oracle` to enumerate)",
            ))
        }
        None => CountOutput::new(&f, brute_force_total(&f, brute_budget)?, started),
    };
    Ok(emit(&out, || out.pretty(), output))
}

fn run_count_star(
    poly: &str,
    method: StarMethod,
    numeric_fallback: bool,
    force: bool,
    field: &FieldArgs,
    output: &OutputArgs,
    warn: &mut dyn Write,
) -> Result<Report, Failure> {
    let ctx = build_field(field)?;
    let (brute_budget, gauss_budget) = budgets()?;
    let g = parse_poly(poly, ctx)?;
    let started = Instant::now();
    let out = match method {
        StarMethod::Closed => {
            let closed = if force { count_star_diagonal_forced(&g) } else { count_star_diagonal(&g) };
            match closed {
                Ok(r) => {
                    let mut out = CountOutput::new(&g, r, started);
                    if force {
                        out.cross_check(brute_force_star(&g, brute_budget), warn)?;
                    }
                    out
                }
                Err(e) if numeric_fallback && g.is_diagonal() && g.term_count() > 0 => {
                    let _ = writeln!(warn, "note: closed form unavailable ({e}); using numeric character sums");
                    let mut r = count_star_charsum(&g)?;
                    r.approximate = true;
                    CountOutput::new(&g, r, started)
                }
                Err(e) => return Err(e.into()),
            }
        }
        StarMethod::Charsum => CountOutput::new(&g, count_star_charsum(&g)?, started),
        StarMethod::Gaussvec => {
            CountOutput::new(&g, count_star_gaussvec(&g, SolutionSource::Nullspace, gauss_budget)?, started)
        }
        StarMethod::Brute => CountOutput::new(&g, brute_force_star(&g, brute_budget)?, started),
    };
    Ok(emit(&out, || out.pretty(), output))
}

fn run_oracle(poly: &str, star: bool, method: OracleMethod, field: &FieldArgs, output: &OutputArgs) -> Result<Report, Failure> {
    let ctx = build_field(field)?;
    let (brute_budget, gauss_budget) = budgets()?;
    let f = parse_poly(poly, ctx)?;
    let started = Instant::now();
    let r = match (method, star) {
        (OracleMethod::Brute, _) => crate::counting::brute_force(&f, star, brute_budget)?,
        (OracleMethod::Gaussvec, true) => count_star_gaussvec(&f, SolutionSource::Nullspace, gauss_budget)?,
        (OracleMethod::Charsum, true) => count_star_charsum(&f)?,
        (_, false) => return Err(Failure::usage("star_only", "this oracle counts N* only; pass --star")),
    };
    let out = CountOutput::new(&f, r, started);
    Ok(emit(&out, || out.pretty(), output))
}

fn run_classify(d: u64, field: &FieldArgs, output: &OutputArgs) -> Result<Report, Failure> {
    let ctx = build_field(field)?;
    let out = match check_admissible(&ctx, d)? {
        Classification::Admissible(adm) => ClassifyOutput {
            q: ctx.q(),
            d,
            admissible: true,
            r: Some(adm.r),
            h: Some(adm.h),
            case: Some(adm.parity_case),
            c1: Some(adm.c1()),
            c2: Some(adm.c2()),
            reason: None,
        },
        Classification::NotAdmissible { reason, .. } => ClassifyOutput {
            q: ctx.q(),
            d,
            admissible: false,
            r: None,
            h: None,
            case: None,
            c1: None,
            c2: None,
            reason: Some(reason),
        },
    };
    Ok(emit(
        &out,
        || match (out.r, out.h, out.c1, out.c2, out.reason) {
            (Some(r), Some(h), Some(c1), Some(c2), _) => format!(
                "d = {d} is admissible over F_{}: r = {r}, h = {h}, case {}, C1 = {c1}, C2 = {c2}",
                out.q,
                label(&out.case)
            ),
            (.., reason) => format!("d = {d} is not admissible over F_{}: {}", out.q, reason.expect("set otherwise")),
        },
        output,
    ))
}

fn run_equiv(f: &str, g: &str, constant_column: Option<bool>, field: &FieldArgs, output: &OutputArgs) -> Result<Report, Failure> {
    let ctx = build_field(field)?;
    let f = parse_poly(f, ctx.clone())?;
    let g = parse_poly(g, ctx)?;
    let report = star_equivalent(&f, &g, EquivOptions { include_constant_column: constant_column })?;
    let out = EquivOutput {
        equivalent: report.equivalent,
        method: report.method,
        reason: report.reason,
        constant_column: report.constant_column,
        certificate: Certificate { f: report.howell_f.to_rows(), g: report.howell_g.to_rows() },
    };
    Ok(emit(
        &out,
        || match out.reason {
            None => format!("*-equivalent ({})\nHowell form of f:\n{}\nHowell form of g:\n{}", label(&out.method), report.howell_f, report.howell_g),
            Some(r) => format!("not *-equivalent: {r}"),
        },
        output,
    ))
}

fn run_gauss(d: u64, j: u64, field: &FieldArgs, output: &OutputArgs) -> Result<Report, Failure> {
    let ctx = build_field(field)?;
    let chr = MultChar::new(&ctx, d, j)?;
    let g = gauss_sum_numeric(&chr);
    let closed_form = match (d >= 3 && j % d != 0).then(|| check_admissible(&ctx, d)) {
        Some(Ok(Classification::Admissible(adm))) => Some(pure_gauss_sum(&adm, j)?),
        _ => None,
    };
    let out = GaussOutput {
        q: ctx.q(),
        d,
        j,
        re: g.value.re,
        im: g.value.im,
        abs: g.value.norm(),
        degenerate: g.degenerate,
        closed_form,
    };
    Ok(emit(
        &out,
        || {
            let mut s = format!("G(eta_{d}^{j}) over F_{} = {:.6} + {:.6}i (|G| = {:.6})", out.q, out.re, out.im, out.abs);
            if let Some(c) = out.closed_form {
                s += &format!(", closed form {c}");
            }
            s
        },
        output,
    ))
}

fn dispatch(cli: Cli, warn: &mut dyn Write) -> Result<Report, Failure> {
    match &cli.cmd {
        Cmd::Count { poly, diagonal_witness, force, field, output } => {
            run_count(poly, diagonal_witness.as_deref(), *force, field, output, warn)
        }
        Cmd::CountStar { poly, method, numeric_fallback, force, field, output } => {
            run_count_star(poly, *method, *numeric_fallback, *force, field, output, warn)
        }
        Cmd::Classify { d, field, output } => run_classify(*d, field, output),
        Cmd::Equiv { f, g, include_constant_column, field, output } => {
            run_equiv(f, g, *include_constant_column, field, output)
        }
        Cmd::Gauss { d, j, field, output } => run_gauss(*d, *j, field, output),
        Cmd::Oracle { poly, star, method, field, output } => run_oracle(poly, *star, *method, field, output),
    }
}

fn pretty_requested(cli: &Cli) -> bool {
    let output = match &cli.cmd {
        Cmd::Count { output, .. }
        | Cmd::CountStar { output, .. }
        | Cmd::Classify { output, .. }
        | Cmd::Equiv { output, .. }
        | Cmd::Gauss { output, .. }
        | Cmd::Oracle { output, .. } => output,
    };
    output.pretty
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    let pretty = pretty_requested(&cli);
    match dispatch(cli, err) {
        Ok(Report::Json(s)) | Ok(Report::Text(s)) => {
            let _ = writeln!(out, "{s}");
            0
        }
        Err(f) => {
            if pretty {
                let _ = writeln!(err, "error ({}): {}", f.reason, f.message);
            } else {
                let body = serde_json::json!({ "error": f.message, "reason": f.reason });
                let _ = writeln!(err, "{body}");
            }
            f.code
        }
    }
}
