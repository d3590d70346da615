//! `cuspcount` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid arguments, 3 engine or cache
//! error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gw_base::{ProviderConfig, ProviderMode, Rational};
use crate::pipeline::{CuspCounter, CuspResult};
use crate::store::{self, format_rational, CACHE_ENV};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cuspcount",
    version,
    about = "Counts rational cuspidal planar curves in P^3 through lines and points"
)]
pub struct Cli {
    /// Persistent memo file (loaded before, saved after the command).
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,

    /// Source of the base numbers N_d(r,s,θ).
    #[arg(long, global = true, value_enum, default_value_t = Provider::Engine)]
    pub provider: Provider,

    /// Base-number table for the `table` and `hybrid` providers.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,

    /// Skip the degree-one oracle and table/engine cross-checks.
    #[arg(long, global = true)]
    pub no_check: bool,

    /// Worker threads for independent rows.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Evaluate degree 1 (outside the counted setting).
    #[arg(long, global = true)]
    pub allow_d1: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Provider {
    Engine,
    Table,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// C_d(r,s) for one constraint choice.
    Compute {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        lines: u32,
        #[arg(long)]
        points: u32,
    },
    /// C_d(r,s) for every r + 2s = 3d + 1.
    Table {
        #[arg(long)]
        degree: u32,
    },
    /// The base number N_d(r,s,θ).
    Base {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        lines: u32,
        #[arg(long)]
        points: u32,
        #[arg(long, default_value_t = 0)]
        theta: u32,
    },
    /// Φ_d(i,j,r,s,θ).
    Phi {
        #[arg(long)]
        degree: u32,
        /// Power i of c1(L*).
        #[arg(long)]
        level: u32,
        /// Power j of ev*H.
        #[arg(long)]
        ev_power: u32,
        #[arg(long)]
        lines: u32,
        #[arg(long)]
        points: u32,
        #[arg(long, default_value_t = 0)]
        theta: u32,
    },
    /// Low-degree checks against known values and structural identities.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_INVALID
    } else {
        EXIT_ENGINE
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mode = match cli.provider {
        Provider::Engine => ProviderMode::Engine,
        Provider::Table => ProviderMode::Table,
        Provider::Hybrid => ProviderMode::Hybrid,
    };
    if mode != ProviderMode::Engine && cli.table.is_none() {
        return Err(Error::InvalidArgument(
            "--provider table/hybrid needs --table <file>".into(),
        ));
    }
    let config = ProviderConfig {
        mode,
        table_path: cli.table.clone(),
        consistency_check: !cli.no_check,
    };
    let counter = CuspCounter::with_config(config)?.allow_degree_one(cli.allow_d1);
    if let Some(path) = &cli.cache {
        if path.exists() {
            counter.import_cache(&store::load(path)?)?;
        }
    }

    let code = execute(cli, &counter, out)?;

    if let Some(path) = &cli.cache {
        store::save(path, &counter.export_cache())?;
    }
    Ok(code)
}

fn execute(cli: &Cli, counter: &CuspCounter, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Compute {
            degree,
            lines,
            points,
        } => {
            let res = counter.cusp_count(degree, lines, points)?;
            write_results(out, cli.format, std::slice::from_ref(&res), false).map_err(io_err)?;
        }
        Command::Table { degree } => {
            if degree < 2 && !(degree == 1 && cli.allow_d1) {
                return Err(Error::InvalidArgument(format!(
                    "table needs degree ≥ 2 (degree 1 only with --allow-d1), got {degree}"
                )));
            }
            let rows = counter.table(degree, cli.jobs)?;
            write_results(out, cli.format, &rows, true).map_err(io_err)?;
        }
        Command::Base {
            degree,
            lines,
            points,
            theta,
        } => {
            let v = counter.taut().base_number(degree, lines, points, theta)?;
            let fields = [
                ("d", degree.to_string()),
                ("r", lines.to_string()),
                ("s", points.to_string()),
                ("theta", theta.to_string()),
                ("value", v.to_string()),
            ];
            write_record(
                out,
                cli.format,
                &format!("N_{degree}({lines},{points},{theta})"),
                &fields,
            )
            .map_err(io_err)?;
        }
        Command::Phi {
            degree,
            level,
            ev_power,
            lines,
            points,
            theta,
        } => {
            let v = counter
                .taut()
                .phi(degree, level, ev_power, lines, points, theta)?;
            let fields = [
                ("d", degree.to_string()),
                ("i", level.to_string()),
                ("j", ev_power.to_string()),
                ("r", lines.to_string()),
                ("s", points.to_string()),
                ("theta", theta.to_string()),
                ("value", format_rational(&v)),
            ];
            let label = format!("Phi_{degree}({level},{ev_power},{lines},{points},{theta})");
            write_record(out, cli.format, &label, &fields).map_err(io_err)?;
        }
        Command::Verify { max_degree } => {
            if max_degree < 2 {
                return Err(Error::InvalidArgument(format!(
                    "verify needs max degree ≥ 2, got {max_degree}"
                )));
            }
            let report = verify::run(counter, max_degree)?;
            write_report(out, cli.format, &report).map_err(io_err)?;
            if !report.passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn result_json(r: &CuspResult) -> Value {
    json!({
        "d": r.d.to_string(),
        "r": r.r.to_string(),
        "s": r.s.to_string(),
        "euler": format_rational(&r.euler),
        "boundary": format_rational(&r.boundary),
        "count": r.count.to_string(),
    })
}

fn write_results(
    out: &mut dyn Write,
    format: Format,
    rows: &[CuspResult],
    as_table: bool,
) -> std::io::Result<()> {
    match format {
        Format::Text => {
            for r in rows {
                writeln!(
                    out,
                    "C_{}({},{}) = {}  (euler {}, boundary {})",
                    r.d,
                    r.r,
                    r.s,
                    r.count,
                    format_rational(&r.euler),
                    format_rational(&r.boundary)
                )?;
            }
        }
        Format::Json => {
            let value = if as_table {
                Value::Array(rows.iter().map(result_json).collect())
            } else {
                result_json(&rows[0])
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap())?;
        }
        Format::Csv => {
            writeln!(out, "d,r,s,euler,boundary,count")?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.d,
                    r.r,
                    r.s,
                    format_rational(&r.euler),
                    format_rational(&r.boundary),
                    r.count
                )?;
            }
        }
    }
    Ok(())
}

fn write_record(
    out: &mut dyn Write,
    format: Format,
    label: &str,
    fields: &[(&str, String)],
) -> std::io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{label} = {}", fields.last().unwrap().1),
        Format::Json => {
            let map: serde_json::Map<String, Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&Value::Object(map)).unwrap()
            )
        }
        Format::Csv => {
            let names: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            writeln!(out, "{}", names.join(","))?;
            writeln!(out, "{}", values.join(","))
        }
    }
}

fn write_report(
    out: &mut dyn Write,
    format: Format,
    report: &verify::Report,
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "passed": c.passed,
                        "failures": c.failures,
                        "seconds": format!("{:.3}", c.elapsed.as_secs_f64()),
                    })
                })
                .collect();
            let value = json!({ "passed": report.passed(), "checks": checks });
            writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap())
        }
        Format::Text | Format::Csv => {
            for c in &report.checks {
                writeln!(
                    out,
                    "{} {:<40} {:>9.3}s",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.elapsed.as_secs_f64()
                )?;
                for f in &c.failures {
                    writeln!(out, "    {f}")?;
                }
            }
            writeln!(
                out,
                "{}",
                if report.passed() {
                    "all checks passed"
                } else {
                    "verification FAILED"
                }
            )
        }
    }
}

/// Parses a decimal rational produced by the JSON or CSV output.
pub fn parse_output_number(s: &str) -> Option<Rational> {
    store::parse_rational(s).ok()
}
