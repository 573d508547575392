//! The `qp` command line: factorization, divisor sums, abundancy indices,
//! searches and structure checks over the nine imaginary quadratic rings with
//! unique factorization.
//!
//! Output is an aligned plain-text table by default and sorted-key JSON with
//! `--json`. Exit status is 0 on success, 1 when a computation fails and 2
//! for malformed invocations.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use qp_core::json::{to_canonical_pretty, to_canonical_string};
use qp_core::primes::split_pair;
use qp_core::theorems::{
    check_even_decomposition, check_lift_identity, check_odd_structure, check_prime_count,
    check_structure_bounds, conjecture_scan, decompose_even, EvenNormDecomposition, VerifierReport,
};
use qp_core::{
    classify_rational_prime, delta, divisors, factor, index, search_odd_norm, search_perfect,
    ExactRational, PrimeClass, QuadInt, RingId,
};
use serde_json::{json, Value};

macro_rules! row {
    ($($cell:expr),* $(,)?) => {
        vec![$($cell.to_string()),*]
    };
}

pub const GRAMMAR: &str = "\
usage: qp <sub> --d <int in K> [--elem <elem>] [--n <even int>] [--t <int >= 2>] [--bound <int>]
          [--odd-norm] [--theorem <id>] [--p <prime>] [--json] [--force] [--out <file>]

  sub     factor | delta | index | divisors | classify | search | verify | conjecture
  K       -163 -67 -43 -19 -11 -7 -3 -2 -1
  elem    <int>[(+|-)<uint>*w], no whitespace, e.g. 3+9*w, -2+1*w, 5 (i may replace w for d = -1)
  id      2.1 2.2 2.3 2.4 2.5 count lift
";

/// Largest search bound accepted without `--force`.
pub const BOUND_LIMIT: u64 = 100_000_000;

#[derive(Parser, Debug)]
#[command(name = "qp", version, about = "Exact abundancy indices over imaginary quadratic rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unit times canonical prime powers
    Factor(ElemArgs),
    /// delta_n(z), and I_n(z) for n > 0
    Delta(ExpArgs),
    /// I_n(z)
    Index(ExpArgs),
    /// One divisor per associate class
    Divisors(ElemArgs),
    /// Inert, ramified or split, with a prime above p
    Classify(ClassifyArgs),
    /// Every canonical z up to a norm bound with I_n(z) = t
    Search(SearchArgs),
    /// Run one structure check on an element
    Verify(VerifyArgs),
    /// Check k = 1 for every even-norm 2-powerfully perfect element up to a bound
    Conjecture(ConjectureArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Discriminant
    #[arg(long = "d", allow_negative_numbers = true, value_parser = parse_ring)]
    ring: RingId,
    #[arg(long)]
    json: bool,
    /// Also write the JSON rendering to this file
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct ElemArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    elem: String,
}

#[derive(Args, Debug)]
struct ExpArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    elem: String,
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    p: BigUint,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    n: i64,
    #[arg(long, default_value_t = 2)]
    t: u64,
    #[arg(long)]
    bound: u64,
    /// Odd norms only, with n = t = 2, running the odd-norm checks on hits
    #[arg(long)]
    odd_norm: bool,
    /// Allow bounds above 10^8
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    elem: String,
    #[arg(long)]
    theorem: TheoremArg,
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    bound: u64,
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoremArg {
    #[value(name = "2.1")]
    T21,
    #[value(name = "2.2")]
    T22,
    #[value(name = "2.3")]
    T23,
    #[value(name = "2.4")]
    T24,
    #[value(name = "2.5")]
    T25,
    Count,
    Lift,
}

fn parse_ring(s: &str) -> Result<RingId, String> {
    let d: i64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    RingId::new(d).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<qp_core::Error> for Failure {
    fn from(e: qp_core::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

/// Text and JSON renderings of one command's result.
struct Rendered {
    text: String,
    json: Value,
}

/// Parse `args` (including the program name) and run the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}\n{GRAMMAR}");
                    2
                }
            };
        }
    };
    let (common, result) = dispatch(&cli.command);
    match result.and_then(|r| emit(common, &r, out)) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = write!(err, "error: {msg}\n\n{GRAMMAR}");
            2
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn emit(common: &Common, rendered: &Rendered, out: &mut dyn Write) -> Result<(), Failure> {
    if let Some(path) = &common.out {
        std::fs::write(path, to_canonical_pretty(&rendered.json) + "\n")
            .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))?;
    }
    let body = if common.json {
        to_canonical_string(&rendered.json) + "\n"
    } else {
        rendered.text.clone()
    };
    out.write_all(body.as_bytes())
        .map_err(|e| Failure::Compute(format!("cannot write output: {e}")))
}

fn dispatch(command: &Command) -> (&Common, Result<Rendered, Failure>) {
    match command {
        Command::Factor(a) => (&a.common, cmd_factor(a)),
        Command::Delta(a) => (&a.common, cmd_delta(a)),
        Command::Index(a) => (&a.common, cmd_index(a)),
        Command::Divisors(a) => (&a.common, cmd_divisors(a)),
        Command::Classify(a) => (&a.common, cmd_classify(a)),
        Command::Search(a) => (&a.common, cmd_search(a)),
        Command::Verify(a) => (&a.common, cmd_verify(a)),
        Command::Conjecture(a) => (&a.common, cmd_conjecture(a)),
    }
}

fn element(common: &Common, text: &str) -> Result<QuadInt, Failure> {
    let z = QuadInt::parse(common.ring, text).map_err(|e| Failure::Usage(e.to_string()))?;
    if z.is_zero() {
        return Err(Failure::Compute("the element must be nonzero".into()));
    }
    Ok(z)
}

fn check_bound(bound: u64, force: bool) -> Result<(), Failure> {
    if bound == 0 {
        return Err(Failure::Usage("--bound must be at least 1".into()));
    }
    if bound > BOUND_LIMIT && !force {
        return Err(Failure::Usage(format!(
            "--bound {bound} exceeds {BOUND_LIMIT}; pass --force to run it anyway"
        )));
    }
    Ok(())
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut text = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(cell);
                line.push_str(&" ".repeat(widths[c] - cell.chars().count() + 2));
            }
        }
        text.push_str(line.trim_end());
        text.push('\n');
    }
    text
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// A value that may not be an integer: a decimal string when it is one,
/// otherwise `{"num", "den"}`.
fn exact_value(r: &ExactRational) -> Value {
    if r.is_integer() {
        Value::String(r.numerator().to_string())
    } else {
        to_value(r)
    }
}

fn cmd_factor(a: &ElemArgs) -> Result<Rendered, Failure> {
    let z = element(&a.common, &a.elem)?;
    let f = factor(&z)?;
    let mut rows = vec![row!["prime", "exp", "norm"]];
    for (pi, e) in f.factors() {
        rows.push(row![pi, e, &pi.norm()]);
    }
    let text = format!("element  {z}\nunit     {}\n{}", f.unit(), table(&rows));
    let mut json = to_value(&f);
    json["element"] = to_value(&z);
    Ok(Rendered { text, json })
}

fn cmd_delta(a: &ExpArgs) -> Result<Rendered, Failure> {
    let z = element(&a.common, &a.elem)?;
    let n = a.n;
    let d = delta(n, &z)?;
    let mut json = json!({ "element": to_value(&z), "n": n });
    json[format!("delta{n}")] = exact_value(&d);
    let mut rows = vec![row!["element", &z], row![&format!("delta_{n}"), &d]];
    if n > 0 {
        let i = index(n, &z)?;
        json[format!("index{n}")] = to_value(&i);
        rows.push(row![&format!("I_{n}"), &i]);
    }
    Ok(Rendered { text: table(&rows), json })
}

fn cmd_index(a: &ExpArgs) -> Result<Rendered, Failure> {
    let z = element(&a.common, &a.elem)?;
    let n = a.n;
    let i = index(n, &z)?;
    let mut json = json!({ "element": to_value(&z), "n": n });
    json[format!("index{n}")] = to_value(&i);
    Ok(Rendered { text: format!("{i}\n"), json })
}

fn cmd_divisors(a: &ElemArgs) -> Result<Rendered, Failure> {
    let z = element(&a.common, &a.elem)?;
    let list = divisors(&z)?;
    let mut rows = vec![row!["divisor", "norm"]];
    for x in &list {
        rows.push(row![x, &x.norm()]);
    }
    let json = json!({ "count": list.len(), "divisors": to_value(&list), "element": to_value(&z) });
    Ok(Rendered { text: table(&rows), json })
}

fn cmd_classify(a: &ClassifyArgs) -> Result<Rendered, Failure> {
    let ring = a.common.ring;
    let class = classify_rational_prime(a.p.clone(), ring)?;
    let mut rows = vec![row!["p", &a.p], row!["class", &class]];
    let mut json = json!({ "class": class.to_string(), "d": ring.d(), "p": a.p.to_string() });
    let primes: Vec<QuadInt> = match class {
        PrimeClass::Inert => vec![ring.from_int(num_bigint::BigInt::from(a.p.clone()))],
        PrimeClass::Ramified => vec![qp_core::prime_above(a.p.clone(), ring)?],
        PrimeClass::Split => {
            let (pi, pi_bar) = split_pair(a.p.clone(), ring)?;
            vec![pi, pi_bar]
        }
    };
    for pi in &primes {
        rows.push(row!["prime", pi]);
    }
    json["primes"] = to_value(&primes);
    Ok(Rendered { text: table(&rows), json })
}

fn search_text(report: &qp_core::SearchReport) -> String {
    let mut text = table(&[
        row!["ring", &report.ring],
        row!["n", &report.n],
        row!["t", &report.t],
        row!["norm bound", &report.norm_bound],
        row!["odd norm only", &report.odd_norm_only],
        row!["scanned", &report.elements_scanned],
        row!["hits", &report.hits.len()],
        row!["wall time ms", &report.wall_time_ms],
    ]);
    if !report.hits.is_empty() {
        let mut rows = vec![row!["hit", "norm"]];
        for z in &report.hits {
            rows.push(row![z, &z.norm()]);
        }
        text.push('\n');
        text.push_str(&table(&rows));
    }
    for v in &report.verifications {
        text.push('\n');
        text.push_str(&report_text(v));
    }
    text
}

fn cmd_search(a: &SearchArgs) -> Result<Rendered, Failure> {
    check_bound(a.bound, a.force)?;
    let ring = a.common.ring;
    let report = if a.odd_norm {
        if a.n != 2 || a.t != 2 {
            return Err(Failure::Usage("--odd-norm searches n = 2, t = 2 only".into()));
        }
        search_odd_norm(ring, a.bound)?
    } else {
        search_perfect(ring, a.n, a.t, a.bound)?
    };
    Ok(Rendered {
        text: search_text(&report),
        json: to_value(&report),
    })
}

fn report_text(report: &VerifierReport) -> String {
    let mut text = format!("{} in {}", report.theorem, report.ring);
    if let Some(z) = &report.subject {
        text.push_str(&format!(" for {z}"));
    }
    if let Some(b) = report.bound {
        text.push_str(&format!(" up to norm {b}"));
    }
    text.push('\n');
    let mut rows = vec![row!["check", "expected", "actual", "result"]];
    for c in &report.checks {
        let result = match (c.pass, c.equality) {
            (false, _) => "FAIL",
            (true, Some(true)) => "pass (equality)",
            (true, _) => "pass",
        };
        rows.push(row![&c.name, &c.expected, &c.actual, &result]);
    }
    text.push_str(&table(&rows));
    let verdict = if report.checks.is_empty() {
        "PASS (vacuous)"
    } else if report.overall {
        "PASS"
    } else {
        "FAIL"
    };
    text.push_str(&format!("overall  {verdict}\n"));
    text
}

fn decomposition_text(dec: &EvenNormDecomposition) -> String {
    table(&[
        row!["xi", &dec.xi],
        row!["gamma", &dec.gamma],
        row!["x", &dec.x],
        row!["q", &dec.q],
        row!["m", &dec.m],
        row!["k", &dec.k],
        row!["v", &dec.v],
    ])
}

fn require_ring(ring: RingId, allowed: &[i64], theorem: &str) -> Result<(), Failure> {
    if allowed.contains(&ring.d()) {
        Ok(())
    } else {
        Err(Failure::Compute(format!(
            "check {theorem} applies to d in {allowed:?}, not d = {}",
            ring.d()
        )))
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<Rendered, Failure> {
    let ring = a.common.ring;
    let z = element(&a.common, &a.elem)?;
    let with_decomposition = |report: VerifierReport, dec: &EvenNormDecomposition| Rendered {
        text: format!("{}\n{}", decomposition_text(dec), report_text(&report)),
        json: json!({ "decomposition": to_value(dec), "report": to_value(&report) }),
    };
    let plain = |report: VerifierReport| Rendered {
        text: report_text(&report),
        json: json!({ "report": to_value(&report) }),
    };
    Ok(match a.theorem {
        TheoremArg::T21 | TheoremArg::T23 => {
            let (allowed, id): (&[i64], _) = match a.theorem {
                TheoremArg::T21 => (&[-1, -2], "2.1"),
                _ => (&[-7], "2.3"),
            };
            require_ring(ring, allowed, id)?;
            let dec = decompose_even(&z)?;
            with_decomposition(check_even_decomposition(&dec)?, &dec)
        }
        TheoremArg::T22 | TheoremArg::T24 => {
            let (allowed, id): (&[i64], _) = match a.theorem {
                TheoremArg::T22 => (&[-1, -2], "2.2"),
                _ => (&[-7], "2.4"),
            };
            require_ring(ring, allowed, id)?;
            let dec = decompose_even(&z)?;
            with_decomposition(check_structure_bounds(&dec), &dec)
        }
        TheoremArg::T25 => plain(check_odd_structure(&z)?),
        TheoremArg::Count => plain(check_prime_count(&z)?),
        TheoremArg::Lift => plain(check_lift_identity(&z)?),
    })
}

fn cmd_conjecture(a: &ConjectureArgs) -> Result<Rendered, Failure> {
    check_bound(a.bound, a.force)?;
    let report = conjecture_scan(a.common.ring, a.bound)?;
    Ok(Rendered {
        text: report_text(&report),
        json: json!({ "report": to_value(&report) }),
    })
}
