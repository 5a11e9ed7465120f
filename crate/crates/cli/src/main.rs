//! `mzv`: reproducible verification runs over the Hoffman-algebra toolkit.
//!
//! Exit status is 0 when every check passes, 1 when a verification fails,
//! and 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mzv_core::identities::{
    lemma2_swapped_control, verify_duality_k1, verify_duality_zeta, verify_proof_steps, IdentityReport, SumSpec,
};
use mzv_core::numeric::{z_eval, zeta_eval};
use mzv_core::relspan::{
    corollary_check_all, corollary_check_with, CorollaryEntry, CorollarySummary, MembershipCertificate, SpanSolver,
};
use mzv_core::series::delta_subst;
use mzv_core::{derivation, DerivationId, Index, NcPoly, VarId, Word};
use serde::Serialize;
use serde_json::Value;

const ORDER_ENV: &str = "MZV_DEFAULT_ORDER";
const MAX_WEIGHT: u32 = 20;

#[derive(Parser, Debug)]
#[command(name = "mzv", version, about = "Exact checks of derivation and duality relations among multiple zeta values")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an exact verification.
    #[command(subcommand)]
    Verify(Verify),
    /// Dual index under τ, e.g. `dual "(3)"`.
    Dual { index: String },
    /// ∂ₙ applied to a word or index.
    Derive { n: u32, target: String },
    /// Δ_t applied to a word or index, truncated at the given order.
    Delta(DeltaArgs),
    /// Truncated numeric value of ζ(index).
    Eval {
        index: String,
        #[arg(long, default_value_t = 100_000)]
        cutoff: u64,
    },
    /// Z-residuals of the polynomials in a JSON artifact.
    Residual {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        cutoff: u64,
    },
    /// Write the weight-k derivation span generators as JSON.
    Span {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        dump: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// The generating-function identities and the lemmas of their proof.
    Theorem {
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, value_enum)]
        eq: Option<Equation>,
    },
    /// Derivation-span membership of the duality sums at a fixed weight.
    Corollary(CorollaryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Equation {
    #[value(name = "2")]
    Zeta,
    #[value(name = "3")]
    K1,
    Lemmas,
}

#[derive(Args, Debug)]
struct CorollaryArgs {
    #[arg(long)]
    weight: u32,
    #[arg(long, requires = "l")]
    m: Option<u32>,
    #[arg(long, requires = "m")]
    l: Option<u32>,
    /// Write the certificates to this file.
    #[arg(long)]
    certificates: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeltaArgs {
    #[arg(long)]
    var: VarId,
    #[arg(long)]
    order: Option<u32>,
    target: String,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let fmt = cli.format;
    match cli.command {
        Command::Verify(Verify::Theorem { order, eq }) => verify_theorem(order, eq, fmt.unwrap_or(Format::Json)),
        Command::Verify(Verify::Corollary(args)) => verify_corollary(&args, fmt.unwrap_or(Format::Json)),
        Command::Dual { index } => dual(&index, fmt.unwrap_or(Format::Text)),
        Command::Derive { n, target } => derive(n, &target, fmt.unwrap_or(Format::Json)),
        Command::Delta(args) => delta(&args, fmt.unwrap_or(Format::Json)),
        Command::Eval { index, cutoff } => eval(&index, cutoff, fmt.unwrap_or(Format::Text)),
        Command::Residual { file, cutoff } => residual(&file, cutoff, fmt.unwrap_or(Format::Text)),
        Command::Span { weight, dump } => span(weight, &dump, fmt.unwrap_or(Format::Json)),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn env_order() -> Result<Option<u32>, Failure> {
    match std::env::var(ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{ORDER_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(None),
    }
}

/// Words are `x`/`y` strings; a leading `(` means an index.
fn parse_word_or_index(s: &str) -> Result<Word, Failure> {
    if s.trim_start().starts_with('(') {
        Ok(s.parse::<Index>()?.to_word()?)
    } else {
        Ok(s.trim().parse::<Word>()?)
    }
}

fn verify_theorem(order: Option<u32>, eq: Option<Equation>, fmt: Format) -> CmdResult {
    let order = match order {
        Some(n) => Some(n),
        None => env_order()?,
    };
    let mut reports: Vec<IdentityReport> = Vec::new();
    let wanted = |e: Equation| eq.is_none() || eq == Some(e);
    if wanted(Equation::Zeta) {
        reports.push(verify_duality_zeta(order.unwrap_or(12)));
    }
    if wanted(Equation::K1) {
        let n = order.unwrap_or(8);
        if n == 0 {
            return Err(Failure::Usage("--eq 3 needs --order of at least 1".into()));
        }
        reports.push(verify_duality_k1(n));
    }
    if wanted(Equation::Lemmas) {
        let n = order.unwrap_or(8);
        if n < 2 {
            return Err(Failure::Usage("the proof lemmas need --order of at least 2".into()));
        }
        reports.extend(verify_proof_steps(n));
        reports.push(lemma2_swapped_control(n));
    }
    match fmt {
        Format::Json => print_json(&reports),
        Format::Text => {
            for r in &reports {
                let verdict = if r.as_expected() { "ok" } else { "UNEXPECTED" };
                println!("{:<32} order {:>3}  {:?} (expected {:?})  {verdict}", r.name, r.order, r.status, r.expected);
            }
        }
    }
    match reports.iter().find(|r| !r.as_expected()) {
        None => Ok(()),
        Some(r) => Err(Failure::Check(match (&r.first_failure, &r.diagnostic) {
            (_, Some(d)) => format!("{}: {d}", r.name),
            (Some(f), None) => {
                format!("{}: first difference at u^{} v^{} w^{}: {}", r.name, f.u, f.v, f.w, f.difference)
            }
            (None, None) => format!("{}: expected failure but identity held", r.name),
        })),
    }
}

#[derive(Serialize)]
struct CorollaryLine {
    m: u32,
    l: u32,
    target_terms: usize,
    certificate_terms: usize,
    verified: bool,
}

#[derive(Serialize)]
struct CorollaryOutput {
    weight: u32,
    generators: usize,
    rank: usize,
    status: &'static str,
    checks: Vec<CorollaryLine>,
}

fn verify_corollary(args: &CorollaryArgs, fmt: Format) -> CmdResult {
    let k = args.weight;
    if !(2..=MAX_WEIGHT).contains(&k) {
        return Err(Failure::Usage(format!("--weight must be between 2 and {MAX_WEIGHT}")));
    }
    let summary = match (args.m, args.l) {
        (Some(m), Some(l)) => {
            let spec = SumSpec::new(k, m, l)?;
            let solver = SpanSolver::new(k);
            let certificate = corollary_check_with(&solver, spec).map_err(|e| Failure::Check(e.to_string()))?;
            CorollarySummary {
                weight: k,
                generators: solver.basis().generators.len(),
                rank: solver.rank(),
                entries: vec![CorollaryEntry { m, l, certificate }],
            }
        }
        _ => corollary_check_all(k).map_err(|e| Failure::Check(e.to_string()))?,
    };
    let checks: Vec<CorollaryLine> = summary
        .entries
        .iter()
        .map(|e| CorollaryLine {
            m: e.m,
            l: e.l,
            target_terms: e.certificate.target.len(),
            certificate_terms: e.certificate.combination.len(),
            verified: e.certificate.verify(),
        })
        .collect();
    let all_verified = checks.iter().all(|c| c.verified);
    if let Some(path) = &args.certificates {
        let certs: Vec<&MembershipCertificate> = summary.entries.iter().map(|e| &e.certificate).collect();
        write_json(path, &certs)?;
    }
    let out = CorollaryOutput {
        weight: k,
        generators: summary.generators,
        rank: summary.rank,
        status: if all_verified { "pass" } else { "fail" },
        checks,
    };
    match fmt {
        Format::Json => print_json(&out),
        Format::Text => {
            println!("weight {k}: {} generators, rank {}", out.generators, out.rank);
            for c in &out.checks {
                println!(
                    "  m={} l={}: certificate with {} terms, {}",
                    c.m,
                    c.l,
                    c.certificate_terms,
                    if c.verified { "verified" } else { "FAILED re-verification" }
                );
            }
            println!("{}, {} certificates", out.status, out.checks.len());
        }
    }
    if all_verified {
        Ok(())
    } else {
        Err(Failure::Check("a certificate did not re-verify".into()))
    }
}

fn dual(index: &str, fmt: Format) -> CmdResult {
    let i: Index = index.parse()?;
    let d = i.dual()?;
    match fmt {
        Format::Text => println!("{d}"),
        Format::Json => print_json(&serde_json::json!({ "index": i.to_string(), "dual": d.to_string() })),
    }
    Ok(())
}

fn derive(n: u32, target: &str, fmt: Format) -> CmdResult {
    let id = DerivationId::new(n)?;
    let image = derivation(id, &NcPoly::from_word(parse_word_or_index(target)?));
    match fmt {
        Format::Json => print_json(&image),
        Format::Text => println!("{image}"),
    }
    Ok(())
}

fn delta(args: &DeltaArgs, fmt: Format) -> CmdResult {
    let order = match args.order {
        Some(n) => n,
        None => env_order()?.unwrap_or(8),
    };
    let word = parse_word_or_index(&args.target)?;
    let image = delta_subst(args.var, &NcPoly::from_word(word), order);
    match fmt {
        Format::Json => print_json(&image),
        Format::Text => {
            for (m, p) in image.terms() {
                println!("{}^{}: {p}", args.var.name(), m.exponent(args.var));
            }
        }
    }
    Ok(())
}

fn eval(index: &str, cutoff: u64, fmt: Format) -> CmdResult {
    let i: Index = index.parse()?;
    let r = zeta_eval(&i, cutoff)?;
    match fmt {
        Format::Text => println!("zeta{i} = {:.15}  tail_bound = {:.15}  cutoff = {cutoff}", r.value, r.tail_bound),
        Format::Json => print_json(&r),
    }
    Ok(())
}

/// Polynomials found in an artifact: an NcPoly, a certificate (its target),
/// a corollary summary, or an array of any of these.
fn collect_polys(v: &Value, out: &mut Vec<NcPoly>) -> Result<(), Failure> {
    match v {
        Value::Array(items) => items.iter().try_for_each(|i| collect_polys(i, out)),
        Value::Object(map) if map.contains_key("terms") && !map.contains_key("order") => {
            out.push(serde_json::from_value(v.clone())?);
            Ok(())
        }
        Value::Object(map) if map.contains_key("target") => collect_polys(&map["target"], out),
        Value::Object(map) if map.contains_key("entries") => collect_polys(&map["entries"], out),
        Value::Object(map) if map.contains_key("certificate") => collect_polys(&map["certificate"], out),
        _ => Err(Failure::Usage("artifact holds no polynomial, certificate or summary".into())),
    }
}

fn residual(file: &Path, cutoff: u64, fmt: Format) -> CmdResult {
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let json: Value = serde_json::from_str(&text)?;
    let mut polys = Vec::new();
    collect_polys(&json, &mut polys)?;
    let mut results = Vec::new();
    for p in &polys {
        results.push(z_eval(p, cutoff)?);
    }
    let within = |r: &mzv_core::numeric::EvalResult| r.value.abs() <= r.tail_bound;
    match fmt {
        Format::Json => print_json(&results),
        Format::Text => {
            for r in &results {
                println!(
                    "residual = {:.15}  tail_bound = {:.15}  {}",
                    r.value,
                    r.tail_bound,
                    if within(r) { "within bound" } else { "EXCEEDS bound" }
                );
            }
        }
    }
    if results.iter().all(within) {
        Ok(())
    } else {
        Err(Failure::Check("a residual exceeds its tail bound".into()))
    }
}

fn span(weight: u32, dump: &Path, fmt: Format) -> CmdResult {
    if !(2..=MAX_WEIGHT).contains(&weight) {
        return Err(Failure::Usage(format!("--weight must be between 2 and {MAX_WEIGHT}")));
    }
    let solver = SpanSolver::new(weight);
    write_json(dump, solver.basis())?;
    let summary = serde_json::json!({
        "weight": weight,
        "generators": solver.basis().generators.len(),
        "rank": solver.rank(),
        "dump": dump.display().to_string(),
    });
    match fmt {
        Format::Json => print_json(&summary),
        Format::Text => println!(
            "weight {weight}: {} generators, rank {}, written to {}",
            solver.basis().generators.len(),
            solver.rank(),
            dump.display()
        ),
    }
    Ok(())
}
