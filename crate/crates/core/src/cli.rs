//! The `minlocal` command line.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 when the command
//! line does not parse (including unknown fields and `n = 0`).

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::arith;
use crate::cyclotomic::{hensel_root_count, mu_witnesses, power_class_index};
use crate::decider::{decide, decide_batch, Decision, Tri};
use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, Scalar};
use crate::iwasawa::{decompose_text, Residuals};
use crate::matrices::GroupKind;
use crate::witnesses::{central_obstruction, essentiality_witness_sut2, Witness};
use crate::DEFAULT_PRECISION;

/// Result of one invocation: exit code plus what goes to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: 0, stdout, stderr: String::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "minlocal", version, about = "Minimality verdicts for matrix groups over subfields of local fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// p-adic digits carried by computations.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(u32).range(1..))]
    precision: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verdict for one group, field and dimension.
    Decide {
        #[arg(value_parser = parse_group)]
        group: GroupKind,
        #[arg(value_parser = parse_field)]
        field: FieldDescriptor,
        #[arg(value_parser = parse_dimension)]
        n: u64,
    },
    /// Verdicts for the cross product of groups, fields and a range of n.
    Batch {
        /// Comma-separated groups, e.g. `SL,PSL`.
        #[arg(value_parser = parse_groups)]
        groups: Groups,
        /// Comma-separated fields, e.g. `Q,Q(i),Q@p=7`.
        #[arg(value_parser = parse_fields)]
        fields: Fields,
        /// Inclusive range `N1..N2`.
        #[arg(value_parser = parse_range)]
        range: RangeInclusive<u64>,
    },
    /// The roots of unity μ_n(F), plus power-class data for complete fields.
    Roots {
        #[arg(value_parser = parse_field)]
        field: FieldDescriptor,
        #[arg(value_parser = parse_dimension)]
        n: u64,
    },
    /// Iwasawa decomposition g = b·k over R, C or Q_p.
    Iwasawa {
        #[arg(value_parser = parse_field)]
        field: FieldDescriptor,
        /// Row-major matrix, e.g. `2,3;0,1/2`.
        matrix: String,
    },
    /// Constructive witnesses.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Verdict tables for SL(n) over Q(i) and over Q with p-adic topologies.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Debug, Subcommand)]
enum WitnessCommand {
    /// Essentiality witness for (m, n) in SUT(2) ≅ F ⋊ F^×.
    Sut2 {
        #[arg(allow_hyphen_values = true)]
        m: String,
        #[arg(allow_hyphen_values = true)]
        n: String,
        #[arg(value_parser = parse_field)]
        field: FieldDescriptor,
    },
    /// Central subgroup of the completed group missing the subfield group.
    Obstruction {
        #[arg(value_parser = parse_field)]
        field: FieldDescriptor,
        #[arg(value_parser = parse_group)]
        group: GroupKind,
        #[arg(value_parser = parse_dimension)]
        n: u64,
    },
}

#[derive(Debug, Subcommand)]
enum ReportCommand {
    /// SL(n, Q(i)) for n = 1..max-n.
    Trichotomy {
        #[arg(long, default_value_t = 16, value_parser = parse_dimension)]
        max_n: u64,
    },
    /// SL(n, Q) with the p-adic topology.
    Padic {
        /// Comma-separated primes.
        #[arg(long, default_value = "3,5,7,11,13,23", value_parser = parse_primes)]
        primes: Primes,
        #[arg(long, default_value_t = 12, value_parser = parse_dimension)]
        max_n: u64,
    },
}

type Groups = Vec<GroupKind>;
type Fields = Vec<FieldDescriptor>;
type Primes = Vec<u64>;

fn parse_group(s: &str) -> std::result::Result<GroupKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_field(s: &str) -> std::result::Result<FieldDescriptor, String> {
    s.parse().map_err(|e: Error| {
        let msg = e.to_string();
        if msg.contains("expected one of") {
            msg
        } else {
            format!("{msg}\nknown fields: {}", FieldDescriptor::catalog_forms().join(", "))
        }
    })
}

fn parse_dimension(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("n must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_groups(s: &str) -> std::result::Result<Groups, String> {
    s.split(',').map(parse_group).collect()
}

/// Splits on commas outside parentheses.
fn parse_fields(s: &str) -> std::result::Result<Fields, String> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts.into_iter().map(parse_field).collect()
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected N1..N2, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok(parse_dimension(a)?..=parse_dimension(b)?)
}

fn parse_primes(s: &str) -> std::result::Result<Primes, String> {
    s.split(',')
        .map(|t| match t.trim().parse::<u64>() {
            Ok(p) if arith::is_prime(p) => Ok(p),
            _ => Err(format!("`{t}` is not a prime")),
        })
        .collect()
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let format = cli.common.format;
    match execute(&cli.command, &cli.common) {
        Ok(text) => Outcome::ok(text),
        Err(e) => {
            // Malformed scalars and matrices are usage errors too.
            let code = if matches!(e, Error::Parse(_)) { 2 } else { 1 };
            match format {
                Format::Json => Outcome {
                    code,
                    stdout: format!("{}\n", json!({ "error": error_kind(&e), "message": e.to_string() })),
                    stderr: String::new(),
                },
                Format::Table => Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") },
            }
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InsufficientPrecision(_) => "insufficient_precision",
        Error::DivisionByZero => "division_by_zero",
        Error::PrimeMismatch(..) => "prime_mismatch",
        Error::InvalidPrime(_) => "invalid_prime",
        Error::InvalidPrimePower(_) => "invalid_prime_power",
        Error::PrecisionTooLarge { .. } => "precision_too_large",
        Error::ZeroResidue(_) => "zero_residue",
        Error::KindMismatch(_) => "kind_mismatch",
        Error::NotInGroup(_) => "not_in_group",
        Error::Indeterminate(_) => "indeterminate",
        Error::Dimension(_) => "dimension",
        Error::Singular => "singular",
        Error::CharacteristicTwo => "characteristic_two",
        Error::TrivialElement => "trivial_element",
        Error::CompleteField(_) => "complete_field",
        Error::NotComplete(_) => "not_complete",
        Error::IdentityPower => "identity_power",
        Error::WitnessRejected(_) => "witness_rejected",
        Error::OracleDidNotStabilize(_) => "oracle_did_not_stabilize",
        Error::InvalidSubfield(_) => "invalid_subfield",
        Error::Unsupported(_) => "unsupported",
        Error::Parse(_) => "parse",
    }
}

fn execute(command: &Command, common: &Common) -> Result<String> {
    let (format, precision) = (common.format, common.precision);
    match command {
        Command::Decide { group, field, n } => {
            let verdict = decide(*group, field, *n)?;
            let d = Decision { group: *group, field: field.clone(), n: *n, verdict };
            Ok(match format {
                Format::Json => to_json(&d),
                Format::Table => decisions_table(std::slice::from_ref(&d)),
            })
        }
        Command::Batch { groups, fields, range } => {
            let rows = decide_batch(groups, fields, range.clone())?;
            Ok(match format {
                Format::Json => to_json(&rows),
                Format::Table => decisions_table(&rows),
            })
        }
        Command::Roots { field, n } => roots(field, *n, precision, format),
        Command::Iwasawa { field, matrix } => iwasawa(field, matrix, precision, format),
        Command::Witness(WitnessCommand::Sut2 { m, n, field }) => {
            let m = Scalar::parse_in(m, field, precision)?;
            let n = Scalar::parse_in(n, field, precision)?;
            let w = essentiality_witness_sut2(&m, &n, field)?;
            Ok(witness_output(&w, format))
        }
        Command::Witness(WitnessCommand::Obstruction { field, group, n }) => {
            let found = central_obstruction(field, *group, *n, precision)?;
            Ok(match (found, format) {
                (Some(o), Format::Json) => to_json(&o.witness(true)),
                (Some(o), Format::Table) => witness_output(&o.witness(true), format),
                (None, Format::Json) => to_json(&serde_json::Value::Null),
                (None, Format::Table) => format!("no central obstruction for {group}({n}, {field})\n"),
            })
        }
        Command::Report(ReportCommand::Trichotomy { max_n }) => report_trichotomy(*max_n, format),
        Command::Report(ReportCommand::Padic { primes, max_n }) => report_padic(primes, *max_n, format),
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(headers.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

fn decisions_table(rows: &[Decision]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|d| {
            vec![
                d.group.to_string(),
                d.field.to_string(),
                d.n.to_string(),
                d.verdict.minimal.to_string(),
                d.verdict.totally_minimal.to_string(),
                d.verdict.citation.clone(),
            ]
        })
        .collect();
    let mut out = table(&["group", "field", "n", "minimal", "totally minimal", "citation"], &body);
    for d in rows.iter().filter(|d| d.verdict.witness.is_some()) {
        let _ = writeln!(out, "\nwitness for {}({}, {}):", d.group, d.n, d.field);
        out.push_str(&witness_text(d.verdict.witness.as_ref().unwrap()));
    }
    out
}

fn witness_text(w: &Witness) -> String {
    let value = serde_json::to_value(w).expect("serializable witness");
    let mut out = String::new();
    let _ = writeln!(out, "  kind: {}", value["kind"].as_str().unwrap_or_default());
    if let Some(data) = value["data"].as_object() {
        for (key, v) in data {
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(|i| i.as_str().map_or(i.to_string(), str::to_string))
                    .collect::<Vec<_>>()
                    .join(", "),
                other => other.to_string(),
            };
            let _ = writeln!(out, "  {key}: {text}");
        }
    }
    let _ = writeln!(out, "  verified: {}", w.verified);
    out
}

fn witness_output(w: &Witness, format: Format) -> String {
    match format {
        Format::Json => to_json(w),
        Format::Table => witness_text(w),
    }
}

fn roots(field: &FieldDescriptor, n: u64, precision: u32, format: Format) -> Result<String> {
    let mu = mu_witnesses(field, n, precision)?;
    let index = if field.is_complete() { Some(power_class_index(field, n)?) } else { None };
    let hensel = match field {
        FieldDescriptor::PAdics(p) => Some(hensel_root_count(*p, n, 1)?),
        _ => None,
    };
    let elements: Vec<String> = mu.witnesses.iter().map(ToString::to_string).collect();
    Ok(match format {
        Format::Json => to_json(&json!({
            "field": field,
            "n": n,
            "order": mu.order,
            "witnesses": elements,
            "verified": mu.verify(),
            "henselCount": hensel,
            "powerClassIndex": index,
        })),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "field: {field}");
            let _ = writeln!(out, "n: {n}");
            let _ = writeln!(out, "|mu_n|: {}", mu.order);
            let _ = writeln!(out, "roots: {}", elements.join(", "));
            let _ = writeln!(out, "verified: {}", mu.verify());
            if let Some(h) = hensel {
                let _ = writeln!(out, "hensel count: {h}");
            }
            if let Some(i) = index {
                let _ = writeln!(out, "[F^x : F^x^n]: {i}");
            }
            out
        }
    })
}

fn iwasawa(field: &FieldDescriptor, text: &str, precision: u32, format: Format) -> Result<String> {
    let r = decompose_text(field, text, precision)?;
    Ok(match format {
        Format::Json => to_json(&r),
        Format::Table => {
            let mut out = format!("b: {}\nk: {}\nk in: {}\n", r.b, r.k, r.k_kind);
            match &r.residuals {
                Residuals::PAdic(entries) => {
                    let _ = writeln!(out, "b*k - g: {}", entries.join(", "));
                }
                Residuals::Arch(a) => {
                    let _ = writeln!(out, "|b*k - g|: {:e}", a.round_trip);
                    let _ = writeln!(out, "|k*k^H - I|: {:e}", a.unitarity);
                    let _ = writeln!(out, "|det k - 1|: {:e}", a.det_k);
                }
            }
            let _ = writeln!(out, "verified: {}", r.verified);
            out
        }
    })
}

/// Status text used by the reports.
fn status_text(d: &Decision) -> &'static str {
    match (d.verdict.minimal, d.verdict.totally_minimal) {
        (_, Tri::Yes) => "totally minimal",
        (Tri::Yes, _) => "minimal, not totally minimal",
        (Tri::No, _) => "not minimal",
        _ => "unknown",
    }
}

#[derive(Serialize)]
struct TrichotomyRow {
    n: u64,
    gcd: u64,
    status: &'static str,
    verdict: &'static str,
    citation: String,
}

/// One row per `n ≤ max_n` for `SL(n, Q(i))`.
pub fn report_trichotomy(max_n: u64, format: Format) -> Result<String> {
    let rows: Vec<TrichotomyRow> = decide_batch(&[GroupKind::SL], &[FieldDescriptor::GaussianRationals], 1..=max_n)?
        .into_iter()
        .map(|d| TrichotomyRow {
            n: d.n,
            gcd: arith::gcd(d.n, 4),
            status: d.verdict.label(),
            verdict: status_text(&d),
            citation: d.verdict.citation,
        })
        .collect();
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Table => table(
            &["n", "gcd(n,4)", "status", "verdict", "citation"],
            &rows
                .iter()
                .map(|r| {
                    vec![r.n.to_string(), r.gcd.to_string(), r.status.into(), r.verdict.into(), r.citation.clone()]
                })
                .collect::<Vec<_>>(),
        ),
    })
}

#[derive(Serialize)]
struct PadicRow {
    p: u64,
    n: u64,
    gcd: u64,
    status: &'static str,
    verdict: &'static str,
    citation: String,
}

/// `SL(n, Q)` with the `p`-adic topology, for each prime and `n ≤ max_n`
/// together with `n = p - 1`.
fn report_padic(primes: &[u64], max_n: u64, format: Format) -> Result<String> {
    let mut rows = Vec::new();
    for &p in primes {
        let field = FieldDescriptor::rationals_padic(p)?;
        let mut ns: Vec<u64> = (1..=max_n).collect();
        if p - 1 > max_n {
            ns.push(p - 1);
        }
        for n in ns {
            let verdict = decide(GroupKind::SL, &field, n)?;
            let d = Decision { group: GroupKind::SL, field: field.clone(), n, verdict };
            rows.push(PadicRow {
                p,
                n,
                gcd: arith::gcd(n, p - 1),
                status: d.verdict.label(),
                verdict: status_text(&d),
                citation: d.verdict.citation,
            });
        }
    }
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Table => table(
            &["p", "n", "gcd(n,p-1)", "status", "verdict", "citation"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.p.to_string(),
                        r.n.to_string(),
                        r.gcd.to_string(),
                        r.status.into(),
                        r.verdict.into(),
                        r.citation.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    })
}
