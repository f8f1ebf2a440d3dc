//! Command-line front end.
//!
//! ```text
//! laplace-phase eval  --family I --c 1 --T inf --s 1000
//! laplace-phase sweep --family J1 --c 1 --T 1 --s-min 32 --s-max 16384 --points 10 --out j1.csv
//! laplace-phase check all
//! ```
//!
//! Exit codes: 0 ok, 1 assertion failure, 2 invalid input, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks;
use crate::error::Error;
use crate::quadrature::{Family, IntegralSpec, Upper};
use crate::verify::{evaluate_point, geometric_grid, run_sweep, SweepConfig, SweepRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const CSV_HEADER: &str = "family,c,T,s,value_log_mag,value_arg,asym_log_mag,asym_arg,rel_err";

#[derive(Debug, Parser)]
#[command(name = "laplace-phase", version, about = "Laplace-type integrals with complex quadratic phase")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one integral and its leading asymptotic term.
    Eval(EvalArgs),
    /// Sweep s on a geometric grid and fit the decay order of the relative error.
    Sweep(SweepArgs),
    /// Run an acceptance suite: theorem1, theorem2, lemma1, remark1, eq9 or all.
    Check { suite: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "I")]
    I,
    #[value(name = "I1")]
    I1,
    #[value(name = "J")]
    J,
    #[value(name = "J1")]
    J1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Csv,
}

#[derive(Debug, Args)]
struct Problem {
    #[arg(long, value_enum, ignore_case = true)]
    family: FamilyArg,
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    /// Upper limit, a number or `inf`.
    #[arg(long = "T", allow_negative_numbers = true)]
    t: String,
    #[arg(long = "rel-tol", default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    problem: Problem,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: Problem,
    #[arg(long = "s-min", allow_negative_numbers = true)]
    s_min: f64,
    #[arg(long = "s-max", allow_negative_numbers = true)]
    s_max: f64,
    #[arg(long, allow_negative_numbers = true)]
    points: i64,
    /// Write the CSV report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Assertions,
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Problem {
    fn family(&self) -> Result<(Family, Upper), Error> {
        let upper: Upper = self.t.parse()?;
        let family = match (self.family, upper) {
            (FamilyArg::I, Upper::Infinite) => Family::IInfinite,
            (FamilyArg::I, Upper::Finite(_)) => Family::IFinite,
            (FamilyArg::I1, _) => Family::I1Moment,
            (FamilyArg::J, _) => Family::JDirect,
            (FamilyArg::J1, _) => Family::J1Reduced,
        };
        Ok((family, upper))
    }
}

fn csv_row(family: Family, c: f64, upper: Upper, row: &SweepRow) -> String {
    format!(
        "{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
        family.name(),
        c,
        match upper {
            Upper::Finite(t) => format!("{t:.16e}"),
            Upper::Infinite => "inf".to_string(),
        },
        row.s,
        row.numeric.log_mag(),
        row.numeric.arg(),
        row.asymptotic.log_mag(),
        row.asymptotic.arg(),
        row.rel_err,
    )
}

fn table_header() -> String {
    format!(
        "{:<3} {:>8} {:>8} {:>12} {:>22} {:>22} {:>22} {:>22} {:>12}",
        "fam", "c", "T", "s", "value_log_mag", "value_arg", "asym_log_mag", "asym_arg", "rel_err"
    )
}

fn table_row(family: Family, c: f64, upper: Upper, row: &SweepRow) -> String {
    format!(
        "{:<3} {:>8} {:>8} {:>12.6e} {:>22.15e} {:>22.15e} {:>22.15e} {:>22.15e} {:>12.4e}",
        family.name(),
        c,
        upper.to_string(),
        row.s,
        row.numeric.log_mag(),
        row.numeric.arg(),
        row.asymptotic.log_mag(),
        row.asymptotic.arg(),
        row.rel_err,
    )
}

fn io_err(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let p = &args.problem;
    let (family, upper) = p.family()?;
    let spec = IntegralSpec::new(family, p.c, upper, args.s)?;
    let row = evaluate_point(&spec, p.rel_tol)?;
    let text = match p.format {
        Format::Csv => format!("{CSV_HEADER}\n{}\n", csv_row(family, p.c, upper, &row)),
        Format::Table => format!("{}\n{}\n", table_header(), table_row(family, p.c, upper, &row)),
    };
    out.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let p = &args.problem;
    let (family, upper) = p.family()?;
    if args.points < 0 {
        return Err(Error::InvalidParameter(format!("points must be >= 0 (got {})", args.points)).into());
    }
    let grid = geometric_grid(args.s_min, args.s_max, args.points as usize)?;
    let cfg = SweepConfig::new(family, p.c, upper, grid, p.rel_tol)?;
    let report = run_sweep(&cfg)?;

    let mut csv = String::new();
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for row in &report.rows {
        csv.push_str(&csv_row(family, p.c, upper, row));
        csv.push('\n');
    }
    csv.push_str(&format!("#fit,{:.16e},{:.16e}\n", report.fitted_order, report.fit_r2));

    let write_out = |out: &mut dyn Write| -> io::Result<()> {
        match p.format {
            Format::Csv => out.write_all(csv.as_bytes()),
            Format::Table => {
                writeln!(out, "{}", table_header())?;
                for row in &report.rows {
                    writeln!(out, "{}", table_row(family, p.c, upper, row))?;
                }
                Ok(())
            }
        }
    };

    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &csv) {
                let _ = fs::remove_file(path);
                return Err(io_err(path, e));
            }
        }
        None => write_out(out).map_err(|e| Failure::Io(e.to_string()))?,
    }
    writeln!(
        out,
        "fitted order {:.6} (R^2 {:.6}, {} points, regime entry at s = {})",
        report.fitted_order,
        report.fit_r2,
        report.fit_points,
        report.rows[report.regime_entry].s
    )
    .map_err(|e| Failure::Io(e.to_string()))
}

fn cmd_check(suite: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let results = checks::run_suite(suite)?;
    let failed = results.iter().filter(|a| !a.passed).count();
    let mut text = String::new();
    for a in &results {
        text.push_str(&a.to_string());
        text.push('\n');
    }
    text.push_str(&format!(
        "{} of {} assertions passed\n",
        results.len() - failed,
        results.len()
    ));
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Io(e.to_string()))?;
    if failed > 0 {
        Err(Failure::Assertions)
    } else {
        Ok(())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let line = msg
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error: {line}");
            return EXIT_INVALID;
        }
    };

    let result = match &cli.command {
        Command::Eval(args) => cmd_eval(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Check { suite } => cmd_check(suite, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Assertions) => {
            let _ = writeln!(err, "error: assertion failure");
            EXIT_ASSERTION
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_invalid_input() {
                EXIT_INVALID
            } else {
                EXIT_NUMERICAL
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}
