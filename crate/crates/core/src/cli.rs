//! Batch front-end: one job per invocation, CSV or JSON artifacts.
//!
//! Exit status is 0 when every embedded verification passes, 1 on a
//! verification failure, 2 on a parse error and 3 on a precondition
//! violation. Nonzero exits print a one-line JSON summary on stderr.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::json;

use crate::arith::{fk_table, parse_table, ArithmeticCoefficients, ConvolutionScalar};
use crate::davenport::{audit, residue_limit_check, EvalMode, ExpansionJob, FormulaMode, DEFAULT_ABEL_R};
use crate::error::{Error, Result};
use crate::mellin::{hurwitz_moment_check, verify_mellin_transform, QuadratureConfig};
use crate::output::{self, TableCell};
use crate::report::VerificationReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// A parsed job: the command with its parameters and the output target.
#[derive(Debug, Clone, Parser)]
#[command(name = "davenport", version, about = "Mellin and Davenport expansion verifiers")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputSpec,
    /// Worker thread cap (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputSpec {
    /// Artifact path; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaArg {
    Paper,
    Corrected,
}

impl From<FormulaArg> for FormulaMode {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Paper => FormulaMode::Literal,
            FormulaArg::Corrected => FormulaMode::Corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Truncated,
    Abel,
    ClosedForm,
}

/// Coefficient source as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithArg {
    Builtin(&'static str),
    Table(PathBuf),
}

impl ArithArg {
    pub fn load(&self) -> Result<ArithmeticCoefficients> {
        Ok(match self {
            ArithArg::Builtin("mobius") => ArithmeticCoefficients::Mobius,
            ArithArg::Builtin("liouville") => ArithmeticCoefficients::Liouville,
            ArithArg::Builtin("von_mangoldt") => ArithmeticCoefficients::VonMangoldt,
            ArithArg::Builtin("unit") => ArithmeticCoefficients::Unit,
            ArithArg::Builtin(_) => ArithmeticCoefficients::Delta,
            ArithArg::Table(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Precondition(format!("cannot read table {}: {e}", path.display())))?;
                ArithmeticCoefficients::Table(parse_table(&text)?)
            }
        })
    }
}

fn parse_arith(text: &str) -> std::result::Result<ArithArg, String> {
    match text {
        "mobius" => Ok(ArithArg::Builtin("mobius")),
        "liouville" => Ok(ArithArg::Builtin("liouville")),
        "von_mangoldt" => Ok(ArithArg::Builtin("von_mangoldt")),
        "unit" => Ok(ArithArg::Builtin("unit")),
        "delta" => Ok(ArithArg::Builtin("delta")),
        _ => match text.strip_prefix("table:") {
            Some(path) if !path.is_empty() => Ok(ArithArg::Table(PathBuf::from(path))),
            _ => Err("expected mobius, liouville, von_mangoldt, unit, delta or table:PATH".into()),
        },
    }
}

/// `re` or `re,im`.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    let s = match text.split_once(',') {
        Some((re, im)) => Complex64::new(num(re)?, num(im)?),
        None => Complex64::new(num(text)?, 0.0),
    };
    if s.re.is_finite() && s.im.is_finite() {
        Ok(s)
    } else {
        Err(format!("non-finite value {text:?}"))
    }
}

/// `start:stop:step`, half open: `start + i*step < stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let slack = self.step * 1e-9;
        (0u64..)
            .map(|i| self.start + i as f64 * self.step)
            .take_while(|&x| x < self.stop - slack)
            .collect()
    }
}

fn parse_grid(text: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err("expected start:stop:step".into());
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    let grid = Grid { start: num(a)?, stop: num(b)?, step: num(c)? };
    if !(grid.step > 0.0 && grid.start.is_finite() && grid.stop.is_finite()) {
        return Err("grid needs finite bounds and a positive step".into());
    }
    if (grid.stop - grid.start) / grid.step > 1e8 {
        return Err("grid has more than 1e8 points".into());
    }
    Ok(grid)
}

#[derive(Debug, Clone, Args)]
pub struct XArgs {
    /// Evaluation point (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Vec<f64>,
    #[arg(long = "x-grid", value_parser = parse_grid)]
    pub x_grid: Option<Grid>,
}

impl XArgs {
    fn points(&self) -> Result<Vec<f64>> {
        let mut xs = self.x.clone();
        if let Some(grid) = self.x_grid {
            xs.extend(grid.points());
        }
        if xs.is_empty() {
            return Err(Error::Precondition("no evaluation points; pass --x or --x-grid".into()));
        }
        if let Some(bad) = xs.iter().find(|x| !x.is_finite()) {
            return Err(Error::Precondition(format!("x = {bad} is not finite")));
        }
        Ok(xs)
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Mellin transform of the N-th power of the fractional part.
    MellinVerify {
        #[arg(long = "N")]
        order: u32,
        /// Strip point `re[,im]` (repeatable).
        #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Vec<Complex64>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Unit periods integrated before the tail expansion.
        #[arg(long, default_value_t = 10_000)]
        periods: u64,
        #[arg(long = "points-per-period", default_value_t = 64)]
        points_per_period: usize,
        #[arg(long = "tail-tol", default_value_t = 1e-9)]
        tail_tol: f64,
    },
    /// Moments of the Hurwitz zeta function against their closed form.
    HurwitzCheck {
        #[arg(long = "N")]
        order: u32,
        #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Vec<Complex64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Both sides of the generalized Davenport expansion.
    DavenportEval {
        #[arg(long = "N")]
        order: u32,
        #[arg(long, value_parser = parse_arith)]
        arith: ArithArg,
        #[arg(long, value_enum, default_value_t = ModeArg::ClosedForm)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = FormulaArg::Corrected)]
        formula: FormulaArg,
        /// Series truncation M. Defaults to 10^5 in truncated mode and to
        /// the smallest M with r^M < 1e-8 in abel mode.
        #[arg(long)]
        terms: Option<u64>,
        /// Abel damping radius.
        #[arg(long = "abel-r", default_value_t = DEFAULT_ABEL_R)]
        abel_r: f64,
        /// Fail when any |lhs - rhs| exceeds this.
        #[arg(long)]
        tol: Option<f64>,
        /// Emit S_k and C_k columns.
        #[arg(long = "per-k")]
        per_k: bool,
        #[command(flatten)]
        xs: XArgs,
    },
    /// Literal and corrected right sides against the left side.
    DavenportAudit {
        #[arg(long = "N")]
        order: u32,
        #[arg(long, value_parser = parse_arith)]
        arith: ArithArg,
        /// Formula whose verdict sets the exit status.
        #[arg(long, value_enum, default_value_t = FormulaArg::Paper)]
        formula: FormulaArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        xs: XArgs,
    },
    /// Divisor-weighted convolutions F_k(n) with A(n).
    FkTable {
        #[arg(long, value_parser = parse_arith)]
        arith: ArithArg,
        /// Comma list or repeated flag.
        #[arg(long, required = true, value_delimiter = ',')]
        k: Vec<u32>,
        #[arg(long = "max-n")]
        max_n: u64,
    },
    /// Limit of the residue function as s tends to 0.
    ResidueCheck {
        #[arg(long, required = true, value_delimiter = ',')]
        k: Vec<u32>,
        #[arg(long = "s-seq", value_delimiter = ',', default_value = "1e-3,1e-4,1e-5")]
        s_seq: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::MellinVerify { .. } => "mellin-verify",
            Command::HurwitzCheck { .. } => "hurwitz-check",
            Command::DavenportEval { .. } => "davenport-eval",
            Command::DavenportAudit { .. } => "davenport-audit",
            Command::FkTable { .. } => "fk-table",
            Command::ResidueCheck { .. } => "residue-check",
        }
    }
}

/// Rendered artifact and the verifications that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub artifact: String,
    pub failures: Vec<serde_json::Value>,
}

/// What a process would print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn error_status(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Pole { .. } => "pole",
        Error::Capacity { .. } => "capacity",
        Error::Domain(_) => "domain",
        Error::Precondition(_) => "precondition",
        Error::RemovableSingularity { .. } => "removable_singularity",
        Error::TailNotMet { .. } => "tail_not_met",
        Error::Divergent(_) => "divergent",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
    }
}

fn summary(status: i32, command: Option<&str>, body: serde_json::Value) -> String {
    let mut v = json!({ "status": status, "command": command });
    if let (Some(dst), serde_json::Value::Object(src)) = (v.as_object_mut(), body) {
        dst.extend(src);
    }
    format!("{v}\n")
}

/// Parses `args` (program name first) and runs the job.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let spec = match JobSpec::try_parse_from(args) {
        Ok(spec) => spec,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { status: EXIT_OK, stdout: text, stderr: String::new() };
            }
            let line = summary(EXIT_PARSE, None, json!({ "kind": "parse", "message": e.kind().to_string() }));
            return Outcome { status: EXIT_PARSE, stdout: String::new(), stderr: format!("{text}{line}") };
        }
    };
    run(&spec)
}

/// Runs a parsed job, writing the artifact to `--out` or returning it as stdout.
pub fn run(spec: &JobSpec) -> Outcome {
    let name = spec.command.name();
    let fail = |e: Error| {
        let status = error_status(&e);
        Outcome {
            status,
            stdout: String::new(),
            stderr: summary(status, Some(name), json!({ "kind": error_kind(&e), "message": e.to_string() })),
        }
    };
    let executed = match spec.threads {
        Some(0) => Err(Error::Precondition("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&spec.command, spec.output.format))),
        None => execute(&spec.command, spec.output.format),
    };
    let exec = match executed {
        Ok(exec) => exec,
        Err(e) => return fail(e),
    };
    let mut stdout = String::new();
    match &spec.output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &exec.artifact) {
                return fail(Error::Precondition(format!("cannot write {}: {e}", path.display())));
            }
        }
        None => stdout = exec.artifact,
    }
    if exec.failures.is_empty() {
        Outcome { status: EXIT_OK, stdout, stderr: String::new() }
    } else {
        let body = json!({ "kind": "verification_failure", "failures": exec.failures });
        Outcome { status: EXIT_VERIFICATION, stdout, stderr: summary(EXIT_VERIFICATION, Some(name), body) }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tolerance {tol} must be positive and finite")))
    }
}

fn report_failures(reports: &[VerificationReport]) -> Vec<serde_json::Value> {
    reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| json!({ "N": r.order, "re_s": r.s.re, "im_s": r.s.im, "abs_err": r.abs_err, "tol": r.tol }))
        .collect()
}

fn render_reports(reports: &[VerificationReport], format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(output::reports_csv(reports)),
        Format::Json => output::to_json(reports),
    }
}

/// Executes one command and renders its artifact.
pub fn execute(command: &Command, format: Format) -> Result<Execution> {
    match command {
        Command::MellinVerify { order, s, tol, periods, points_per_period, tail_tol } => {
            check_tol(*tol)?;
            let cfg = QuadratureConfig {
                periods: *periods,
                points_per_period: *points_per_period,
                tail_tol: *tail_tol,
                ..QuadratureConfig::default()
            };
            let check = verify_mellin_transform(*order, s, *tol, &cfg)?;
            Ok(Execution {
                artifact: render_reports(&check.reports, format)?,
                failures: report_failures(&check.reports),
            })
        }
        Command::HurwitzCheck { order, s, tol } => {
            check_tol(*tol)?;
            let reports = s
                .iter()
                .map(|&s| hurwitz_moment_check(*order, s, *tol))
                .collect::<Result<Vec<_>>>()?;
            Ok(Execution { artifact: render_reports(&reports, format)?, failures: report_failures(&reports) })
        }
        Command::DavenportEval { order, arith, mode, formula, terms, abel_r, tol, per_k, xs } => {
            if let Some(tol) = tol {
                check_tol(*tol)?;
            }
            let eval = match mode {
                ModeArg::Truncated => EvalMode::Truncated { terms: terms.unwrap_or(100_000) },
                ModeArg::Abel => match (EvalMode::abel(*abel_r)?, terms) {
                    (EvalMode::Abel { r, .. }, Some(terms)) => EvalMode::Abel { terms: *terms, r },
                    (auto, _) => auto,
                },
                ModeArg::ClosedForm => EvalMode::ClosedForm,
            };
            let xs = xs.points()?;
            let job = ExpansionJob::new(*order, arith.load()?, (*formula).into(), eval)?.prepare()?;
            let rows = job.sides_grid(&xs)?;
            let failures = match tol {
                Some(tol) => rows
                    .iter()
                    .filter(|r| !(r.abs_err() <= *tol))
                    .map(|r| json!({ "x": r.x, "abs_err": r.abs_err(), "tol": tol }))
                    .collect(),
                None => Vec::new(),
            };
            let artifact = match format {
                Format::Csv => output::sides_csv(*order, &rows, *per_k),
                Format::Json => output::to_json(&rows)?,
            };
            Ok(Execution { artifact, failures })
        }
        Command::DavenportAudit { order, arith, formula, tol, xs } => {
            check_tol(*tol)?;
            let xs = xs.points()?;
            let report = audit(*order, &arith.load()?, &xs, *tol)?;
            let mode = FormulaMode::from(*formula);
            let failures = if report.passes(mode) {
                Vec::new()
            } else {
                vec![json!({ "formula": mode.name(), "max_abs_err": report.max_err(mode), "tol": tol })]
            };
            let artifact = match format {
                Format::Csv => output::audit_csv(&report),
                Format::Json => output::to_json(&report)?,
            };
            Ok(Execution { artifact, failures })
        }
        Command::FkTable { arith, k, max_n } => {
            if *max_n < 1 {
                return Err(Error::Precondition("--max-n must be at least 1".into()));
            }
            let a = arith.load()?;
            let artifact = if a.is_exact() {
                render_fk::<BigRational>(&a, *max_n, k, format)?
            } else {
                render_fk::<f64>(&a, *max_n, k, format)?
            };
            Ok(Execution { artifact, failures: Vec::new() })
        }
        Command::ResidueCheck { k, s_seq, tol } => {
            check_tol(*tol)?;
            let reports = k
                .iter()
                .map(|&k| residue_limit_check(k, s_seq, *tol))
                .collect::<Result<Vec<_>>>()?;
            Ok(Execution { artifact: render_reports(&reports, format)?, failures: report_failures(&reports) })
        }
    }
}

fn render_fk<T: ConvolutionScalar + TableCell>(a: &ArithmeticCoefficients, m: u64, k: &[u32], format: Format) -> Result<String> {
    let table = fk_table::<T>(a, m, k)?;
    match format {
        Format::Csv => Ok(output::fk_table_csv(&table)),
        Format::Json => output::fk_table_json(&table),
    }
}
