//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification or oracle cross-check fails,
//! 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::catalog;
use crate::chars::Characters;
use crate::count::PointCounter;
use crate::error::Error;
use crate::expsum::{self, ExpSumResult};
use crate::field::{parse_field_spec, prime_powers_up_to, FieldDescriptor};
use crate::oracle;
use crate::par::Exec;
use crate::poly::{SparsePoly, Variety};
use crate::verify::{self, VerifyReport, VerifyRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fqpoints",
    version,
    about = "Point counts over finite fields via Gauss sums"
)]
struct Cli {
    /// Run every engine single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Gauss sum table G(χ_k), k = 0..q-2, as CSV.
    Gauss {
        /// Field, e.g. `q=9` or `q=3^2;mod=1,0,1`.
        field: String,
        #[arg(long, default_value_t = 1)]
        theta_shift: u32,
        /// Write the table to this file instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Count the points of a projective variety.
    Count(CountArgs),
    /// Evaluate the exponential sum of a Laurent polynomial over the torus.
    Expsum {
        #[arg(long)]
        field: Option<String>,
        /// Laurent polynomial in t1, t2, ...
        #[arg(long)]
        poly: String,
        /// Evaluate at every prime power in `qmin..qmax` (inclusive).
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = 1)]
        theta_shift: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Brute-force reference computations.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Check closed-form identities over a sweep of prime powers.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    field: String,
    /// Variety file, or `builtin:twisted-cubic` / `builtin:segre-1x2`.
    #[arg(long)]
    variety: String,
    /// Include per-stratum counts and per-subset kernels.
    #[arg(long)]
    explain: bool,
    /// Cross-check against brute-force enumeration.
    #[arg(long)]
    oracle: bool,
    /// Also write the report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    theta_shift: u32,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Count points by checking every canonical representative.
    Count {
        #[arg(long)]
        field: String,
        #[arg(long)]
        variety: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Every builtin identity.
    #[command(name = "paper")]
    Identities(VerifyArgs),
    /// `L = 2q² - 3q - 1` for every additive character.
    #[command(name = "L")]
    L(VerifyArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    qmax: u64,
    /// Also write the report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct OracleReport {
    field: String,
    inputs: Vec<String>,
    total: u64,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IntegralityViolation { .. } | Error::DivisibilityViolation { .. } => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `argv` (including the program name), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match dispatch(cli.command, exec, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            EXIT_FAILED
        }
    }
}

fn dispatch(command: Command, exec: Exec, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Gauss {
            field,
            theta_shift,
            csv,
        } => gauss(&field, theta_shift, csv.as_deref(), exec, out),
        Command::Count(args) => count(&args, exec, out),
        Command::Expsum {
            field,
            poly,
            sweep,
            theta_shift,
            csv,
        } => expsum_cmd(
            field.as_deref(),
            &poly,
            sweep.as_deref(),
            theta_shift,
            csv.as_deref(),
            exec,
            out,
        ),
        Command::Oracle {
            command:
                OracleCommand::Count {
                    field,
                    variety,
                    json,
                },
        } => {
            let f = parse_field(&field)?;
            let v = load_variety(&f, &variety)?;
            let report = OracleReport {
                field: f.spec_string(),
                inputs: v.polys.iter().map(|p| p.to_text(&f)).collect(),
                total: oracle::brute_projective_count_with(exec, &f, &v)?,
            };
            emit_json(&report, json.as_deref(), out)
        }
        Command::Verify { command } => {
            let (name, args) = match &command {
                VerifyCommand::Identities(a) => ("paper", a),
                VerifyCommand::L(a) => ("L", a),
            };
            let mut sink = |row: &VerifyRow| {
                let _ = writeln!(out, "{}", format_row(row));
            };
            let report = match command {
                VerifyCommand::Identities(_) => {
                    verify::verify_identities(args.qmax, exec, &mut sink)?
                }
                VerifyCommand::L(_) => verify::verify_l(args.qmax, exec, &mut sink)?,
            };
            finish_verify(name, &report, args.json.as_deref(), out)
        }
    }
}

fn parse_field(spec: &str) -> std::result::Result<FieldDescriptor, Failure> {
    Ok(parse_field_spec(spec)?)
}

fn characters(
    field: FieldDescriptor,
    shift: u32,
    exec: Exec,
) -> std::result::Result<Characters, Failure> {
    Ok(Characters::new(Arc::new(field), shift)?.with_exec(exec))
}

fn load_variety(field: &FieldDescriptor, source: &str) -> std::result::Result<Variety, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Ok(catalog::builtin_variety(field, name)?);
    }
    let text = fs::read_to_string(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
    Ok(Variety::parse(field, &text)?)
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    if let Some(path) = path {
        fs::write(path, format!("{text}\n"))?;
    }
    Ok(())
}

fn gauss(spec: &str, shift: u32, csv: Option<&Path>, exec: Exec, out: &mut dyn Write) -> Outcome {
    let chars = characters(parse_field(spec)?, shift, exec)?;
    let mut text = String::from("k,re,im,abs2\n");
    for (k, g) in chars.gauss_table().iter().enumerate() {
        text.push_str(&format!(
            "{k},{:.12},{:.12},{:.12}\n",
            g.re,
            g.im,
            g.norm_sqr()
        ));
    }
    match csv {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn count(args: &CountArgs, exec: Exec, out: &mut dyn Write) -> Outcome {
    let field = parse_field(&args.field)?;
    let variety = load_variety(&field, &args.variety)?;
    let counter = PointCounter::new(characters(field, args.theta_shift, exec)?);
    let mut report = counter.projective_count(&variety)?;
    if !args.explain {
        report = report.summary();
    }
    if args.oracle {
        report.oracle_total = Some(oracle::brute_projective_count_with(
            exec,
            counter.field(),
            &variety,
        )?);
    }
    emit_json(&report, args.json.as_deref(), out)?;
    match report.oracle_total {
        Some(o) if o != report.total => Err(Failure::Check(format!(
            "oracle count {o} differs from {}",
            report.total
        ))),
        _ => Ok(()),
    }
}

fn parse_sweep(text: &str) -> std::result::Result<(u64, u64), Failure> {
    let bad = || Failure::Usage(format!("invalid sweep `{text}`, expected `qmin..qmax`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

fn expsum_value(chars: &Characters, text: &str) -> std::result::Result<ExpSumResult, Failure> {
    let g = SparsePoly::parse_infer(chars.field(), text)?;
    Ok(expsum::laurent_exp_sum(chars, &g)?)
}

fn format_value(r: &ExpSumResult) -> String {
    match r.rounded {
        Some(v) => v.to_string(),
        None => format!("{:.12}{:+.12}i", r.re, r.im),
    }
}

fn expsum_cmd(
    field: Option<&str>,
    poly: &str,
    sweep: Option<&str>,
    shift: u32,
    csv: Option<&Path>,
    exec: Exec,
    out: &mut dyn Write,
) -> Outcome {
    let fields: Vec<FieldDescriptor> = match (field, sweep) {
        (Some(spec), None) => vec![parse_field(spec)?],
        (None, Some(range)) => {
            let (lo, hi) = parse_sweep(range)?;
            prime_powers_up_to(hi)
                .into_iter()
                .filter(|&q| q >= lo)
                .map(FieldDescriptor::from_order)
                .collect::<Result<_, _>>()?
        }
        _ => {
            return Err(Failure::Usage(
                "expected exactly one of --field and --sweep".into(),
            ))
        }
    };
    let single = sweep.is_none();
    let mut table = String::from("q,re,im,rounded\n");
    for f in fields {
        let q = f.q();
        let r = expsum_value(&characters(f, shift, exec)?, poly)?;
        if single {
            writeln!(out, "{}", format_value(&r))?;
        } else {
            writeln!(out, "q={q} {}", format_value(&r))?;
        }
        let rounded = r.rounded.map_or_else(String::new, |v| v.to_string());
        table.push_str(&format!("{q},{:.12},{:.12},{rounded}\n", r.re, r.im));
    }
    if let Some(path) = csv {
        fs::write(path, table)?;
    }
    Ok(())
}

fn format_row(row: &VerifyRow) -> String {
    format!(
        "{} q={:<3} {:<28} expected={} actual={} ({:.2} ms)",
        if row.pass { "PASS" } else { "FAIL" },
        row.q,
        row.name,
        row.expected,
        row.actual,
        row.wall_ms
    )
}

fn finish_verify(
    name: &str,
    report: &VerifyReport,
    json: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let passed = report.rows.iter().filter(|r| r.pass).count();
    writeln!(out, "verify {name}: {passed}/{} passed", report.rows.len())?;
    if let Some(path) = json {
        let text =
            serde_json::to_string_pretty(report).map_err(|e| Failure::Usage(e.to_string()))?;
        fs::write(path, format!("{text}\n"))?;
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} of {} identities failed",
            report.rows.len() - passed,
            report.rows.len()
        )))
    }
}
