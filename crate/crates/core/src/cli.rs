//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
//! usage or parse errors. Setting `RIGHTQ_VERBOSE=1` prints extra detail
//! (normal forms per degree, counterexample bodies).

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::biword::Biword;
use crate::expr::Expression;
use crate::io::{parse_biword, parse_expression};
use crate::macmahon::{qmm_check, QmmReport, Variant};
use crate::oracle::{check_basis_dimension, DimensionReport, OracleError, QValue};
use crate::par::Parallelism;
use crate::phi::{phi, phi_inv, principle_fuzz};
use crate::rewrite::{check_ambiguity_with, check_confluence_fuzz, overlap_patterns, ReductionSystem, Reducer, Strategy};

pub const VERBOSE_ENV: &str = "RIGHTQ_VERBOSE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rightq", version, about = "Normal forms and identities in the right quantum algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SystemArg {
    S,
    Sq,
}

impl From<SystemArg> for ReductionSystem {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::S => ReductionSystem::S,
            SystemArg::Sq => ReductionSystem::Sq,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Q,
    One,
    Strong,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Tsv,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "leftmost" => Ok(Strategy::Leftmost),
        "rightmost" => Ok(Strategy::Rightmost),
        _ => s
            .strip_prefix("random:")
            .and_then(|seed| seed.parse().ok())
            .map(Strategy::RandomSeeded)
            .ok_or_else(|| format!("expected leftmost, rightmost or random:<seed>, got {s:?}")),
    }
}

fn parse_q(s: &str) -> Result<QValue, String> {
    let (p, d) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d == BigInt::from(0) {
        return Err("denominator must be nonzero".into());
    }
    if p == BigInt::from(0) {
        return Err("q must be nonzero".into());
    }
    let q = BigRational::new(p, d);
    Ok(if q == BigRational::from_integer(1.into()) {
        QValue::One
    } else {
        QValue::Rational(q)
    })
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce an expression to its normal form.
    Normalize {
        #[arg(long, value_enum, default_value = "s")]
        system: SystemArg,
        #[arg(long, default_value = "leftmost", value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print every rewrite step of the canonical reduction of a biword.
    Trace {
        #[arg(long, value_enum, default_value = "s")]
        system: SystemArg,
        biword: String,
    },
    /// Inversion statistics and structure of a biword.
    Stats { biword: String },
    /// Apply the weight isomorphism or its inverse.
    Phi {
        #[arg(long)]
        inverse: bool,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    #[command(subcommand)]
    Check(CheckCommand),
    /// Verify Ferm * Bos reduces to 1 degree by degree.
    Qmm {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value = "strong")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare the quotient dimension with the number of irreducible biwords.
    Basis {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "1", value_parser = parse_q, allow_hyphen_values = true)]
        q: QValue,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCommand {
    /// Resolve every overlap x>y>z, a>=b>=c over {1,2,3}.
    Ambiguities {
        /// Check one system only; both by default.
        #[arg(long, value_enum)]
        system: Option<SystemArg>,
    },
    /// Compare leftmost and random-position reduction on random biwords.
    Confluence {
        #[command(flatten)]
        fuzz: FuzzArgs,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "s")]
        system: SystemArg,
    },
    /// E in I iff phi(E) in I_q, on random members and non-members.
    Principle {
        #[command(flatten)]
        fuzz: FuzzArgs,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn verbose() -> bool {
    std::env::var(VERBOSE_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Runs the CLI on `args` (including the program name), writing to `out` and
/// `err`, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
    }
}

enum CliError {
    Usage(String),
    Failed(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<crate::io::ParseError> for CliError {
    fn from(e: crate::io::ParseError) -> Self {
        CliError::Usage(format!("parse error {e}"))
    }
}

impl From<crate::rewrite::RewriteError> for CliError {
    fn from(e: crate::rewrite::RewriteError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::ZeroQ | OracleError::BudgetExceeded { .. } => CliError::Usage(e.to_string()),
            OracleError::Rewrite(e) => e.into(),
        }
    }
}

fn require_r(r: u32) -> Result<(), CliError> {
    if r == 0 {
        Err(CliError::Usage("--r must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Normalize { system, strategy, expr } => {
            let e = parse_expression(&expr)?;
            let report = Reducer::new(system.into(), strategy).reduce(&e)?;
            writeln!(out, "{}", report.normal_form)?;
            writeln!(out, "steps\t{}", report.rewrite_steps)?;
            Ok(EXIT_OK)
        }
        Command::Trace { system, biword } => {
            let b = parse_biword(&biword)?;
            let report = Reducer::canonical(system.into()).reduce_traced(&Expression::from_biword(b))?;
            for event in report.trace.iter().flatten() {
                writeln!(out, "{event}")?;
            }
            writeln!(out, "{}", report.normal_form)?;
            Ok(EXIT_OK)
        }
        Command::Stats { biword } => {
            let b = parse_biword(&biword)?;
            write_stats(out, &b)?;
            Ok(EXIT_OK)
        }
        Command::Phi { inverse, expr } => {
            let e = parse_expression(&expr)?;
            let image = if inverse { phi_inv(&e) } else { phi(&e) };
            writeln!(out, "{image}")?;
            Ok(EXIT_OK)
        }
        Command::Check(check) => run_check(check, out),
        Command::Qmm {
            r,
            max_degree,
            variant,
            format,
        } => {
            require_r(r)?;
            let variant = match variant {
                VariantArg::Q => Variant::Q,
                VariantArg::One | VariantArg::Strong => Variant::One,
            };
            let report = qmm_check(r, max_degree, variant)?;
            write_qmm(out, &report, format)?;
            Ok(exit_for(report.passed()))
        }
        Command::Basis { r, degree, q, format } => {
            require_r(r)?;
            let report = check_basis_dimension(r, degree, &q)?;
            write_basis(out, &report, format)?;
            Ok(exit_for(report.matches))
        }
    }
}

fn write_stats(out: &mut dyn Write, b: &Biword) -> std::io::Result<()> {
    let dds: Vec<String> = b.double_descents().iter().map(usize::to_string).collect();
    writeln!(out, "biword\t{b}")?;
    writeln!(out, "length\t{}", b.len())?;
    writeln!(out, "inv\t{}", b.top_word().inv())?;
    writeln!(out, "imv\t{}", b.bottom_word().imv())?;
    writeln!(out, "inv-\t{}", b.inv_minus())?;
    writeln!(out, "inv+\t{}", b.inv_plus())?;
    writeln!(out, "double-descents\t{}", dds.join(","))?;
    writeln!(out, "irreducible\t{}", b.is_irreducible())?;
    writeln!(out, "circuit\t{}", b.is_circuit())
}

fn run_check(check: CheckCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    match check {
        CheckCommand::Ambiguities { system } => {
            let systems: Vec<ReductionSystem> = match system {
                Some(s) => vec![s.into()],
                None => vec![ReductionSystem::S, ReductionSystem::Sq],
            };
            let mut all_ok = true;
            for system in systems {
                let reducer = Reducer::canonical(system);
                for [x, y, z, a, b, c] in overlap_patterns(3) {
                    let ok = check_ambiguity_with(&reducer, [x, y, z, a, b, c])?;
                    all_ok &= ok;
                    writeln!(out, "{system}\t{x}{y}{z}/{a}{b}{c}\t{}", if ok { "resolved" } else { "UNRESOLVED" })?;
                }
            }
            writeln!(out, "result\t{}", if all_ok { "pass" } else { "fail" })?;
            Ok(exit_for(all_ok))
        }
        CheckCommand::Confluence { fuzz, max_len, system } => {
            require_r(fuzz.r)?;
            let report = check_confluence_fuzz(fuzz.r, max_len, fuzz.trials, fuzz.seed, system.into(), Parallelism::default())?;
            writeln!(out, "system\t{}", report.system)?;
            writeln!(out, "trials\t{}", report.trials)?;
            writeln!(out, "disagreements\t{}", report.counterexamples.len())?;
            for d in &report.counterexamples {
                writeln!(out, "counterexample\t{}\t{}\t{}", d.trial, d.biword, d.strategy)?;
                if verbose() {
                    writeln!(out, "  leftmost\t{}", d.leftmost)?;
                    writeln!(out, "  other\t{}", d.other)?;
                }
            }
            writeln!(out, "result\t{}", if report.passed() { "pass" } else { "fail" })?;
            Ok(exit_for(report.passed()))
        }
        CheckCommand::Principle { fuzz, max_len } => {
            if fuzz.r < 2 {
                return Err(CliError::Usage("--r must be at least 2 for the ideals to be nontrivial".into()));
            }
            let report = principle_fuzz(fuzz.r, max_len, fuzz.trials, fuzz.seed, Parallelism::default())?;
            writeln!(out, "members\t{}", report.members)?;
            writeln!(out, "non-members\t{}", report.non_members)?;
            writeln!(out, "failures\t{}", report.failures.len())?;
            for f in &report.failures {
                writeln!(out, "counterexample\t{}", f.expression)?;
            }
            writeln!(out, "result\t{}", if report.passed() { "pass" } else { "fail" })?;
            Ok(exit_for(report.passed()))
        }
    }
}

/// Writes a QMM report as an aligned table (`text`) or `key<TAB>value` blocks
/// (`tsv`), one block per degree after a header block.
pub fn write_qmm_report(out: &mut dyn Write, report: &QmmReport, tsv: bool) -> std::io::Result<()> {
    write_qmm(out, report, if tsv { Format::Tsv } else { Format::Text })
}

fn write_qmm(out: &mut dyn Write, report: &QmmReport, format: Format) -> std::io::Result<()> {
    let verbose = verbose();
    match format {
        Format::Text => {
            writeln!(out, "r={} max_degree={} variant={} system={}", report.r, report.max_degree, report.variant, report.system)?;
            writeln!(out, "{:>6}  {:>8}  {:>10}  {:<4}  normal_form", "degree", "terms", "steps", "ok")?;
            for d in &report.per_degree {
                let nf = d.normal_form.to_string();
                writeln!(
                    out,
                    "{:>6}  {:>8}  {:>10}  {:<4}  {}",
                    d.degree,
                    d.terms_before_reduction,
                    d.rewrite_steps,
                    if d.ok { "ok" } else { "FAIL" },
                    if verbose || nf.len() <= 60 { nf } else { format!("<{} terms>", d.normal_form.len()) }
                )?;
            }
            writeln!(out, "result: {}", if report.passed() { "pass" } else { "fail" })
        }
        Format::Tsv => {
            writeln!(out, "r\t{}", report.r)?;
            writeln!(out, "max_degree\t{}", report.max_degree)?;
            writeln!(out, "variant\t{}", report.variant)?;
            writeln!(out, "system\t{}", report.system)?;
            writeln!(out, "passed\t{}", report.passed())?;
            for d in &report.per_degree {
                writeln!(out)?;
                writeln!(out, "degree\t{}", d.degree)?;
                writeln!(out, "terms_before_reduction\t{}", d.terms_before_reduction)?;
                writeln!(out, "rewrite_steps\t{}", d.rewrite_steps)?;
                writeln!(out, "ok\t{}", d.ok)?;
                writeln!(out, "normal_form\t{}", d.normal_form)?;
            }
            Ok(())
        }
    }
}

pub fn write_basis_report(out: &mut dyn Write, report: &DimensionReport, tsv: bool) -> std::io::Result<()> {
    write_basis(out, report, if tsv { Format::Tsv } else { Format::Text })
}

fn write_basis(out: &mut dyn Write, report: &DimensionReport, format: Format) -> std::io::Result<()> {
    let fields = [
        ("r", report.r.to_string()),
        ("degree", report.degree.to_string()),
        ("q", report.q.to_string()),
        ("ambient_dim", report.ambient_dim.to_string()),
        ("relation_rank", report.relation_rank.to_string()),
        ("quotient_dim", report.quotient_dim.to_string()),
        ("irreducible_count", report.irreducible_count.to_string()),
        ("match", report.matches.to_string()),
    ];
    for (k, v) in fields {
        match format {
            Format::Text => writeln!(out, "{k:<18} {v}")?,
            Format::Tsv => writeln!(out, "{k}\t{v}")?,
        }
    }
    Ok(())
}
