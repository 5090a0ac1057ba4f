//! The `liepair` command line: `validate`, `fedosov`, `atiyah` and `verify`.
//!
//! Exit codes: 0 success, 1 a check or validation failed, 2 usage error,
//! 3 internal invariant violated, 4 I/O error, 5 malformed definition file.

use std::ffi::OsString;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::algebroid::ChartAlgebroid;
use crate::atiyah::{atiyah_data, atiyah_dg, atiyah_lie_pair, check_theorem2, lie_pair_closure, AtiyahError, DConnection};
use crate::fedosov::{fedosov_x, FedosovData, FedosovError, LieDerivative, TruncationOrder};
use crate::file::{gamma_binding, load_algebroid, load_unvalidated, LoadError};
use crate::parse::parse_rational;
use crate::poly::Rational;
use crate::report::{Report, Section};
use crate::sections::Carrier;
use crate::suites::{fedosov_suite, run_suite, Suite, SuiteConfig};
use crate::validation::{Check, ValidationReport};

#[derive(Debug, Parser)]
#[command(name = "liepair", version, about = "Fedosov dg manifolds and Atiyah classes of Lie pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the algebroid axioms of a definition file.
    Validate(Common),
    /// Build the Fedosov vector field and print X and D.
    Fedosov(Common),
    /// Compute both Atiyah cocycles and compare them.
    Atiyah(Common),
    /// Run an invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Seed for the randomized samples.
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Algebroid definition file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Truncation order N of the Fedosov construction.
    #[arg(long, default_value_t = 4)]
    max_b_degree: u32,
    /// Value bound to the parameter `gamma`.
    #[arg(long, value_parser = parse_gamma, allow_hyphen_values = true)]
    gamma_param: Option<Rational>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    All,
    Homotopy,
    Fedosov,
    Atiyah,
    Ddg,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Homotopy => Suite::Homotopy,
            SuiteArg::Fedosov => Suite::Fedosov,
            SuiteArg::Atiyah => Suite::Atiyah,
            SuiteArg::Ddg => Suite::Ddg,
        }
    }
}

fn parse_gamma(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("structure validation failed:\n{0}")]
    Validation(ValidationReport),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Schema(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Io(_) => 4,
            CliError::Schema(_) => 5,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io { .. } => CliError::Io(e.to_string()),
            LoadError::Invalid(report) => CliError::Validation(report),
            LoadError::UnboundParameter(_) | LoadError::UnknownParameter(_) => CliError::Usage(e.to_string()),
            LoadError::Json(_) | LoadError::Schema(_) | LoadError::Parse { .. } | LoadError::Algebroid(_) => {
                CliError::Schema(e.to_string())
            }
        }
    }
}

impl From<FedosovError> for CliError {
    fn from(e: FedosovError) -> Self {
        match e {
            FedosovError::Invalid(report) => CliError::Validation(report),
            FedosovError::OrderTooSmall(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<AtiyahError> for CliError {
    fn from(e: AtiyahError) -> Self {
        match e {
            AtiyahError::Fedosov(f) => f.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// Run the command line with the given arguments (including the program
/// name) and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| execute(&cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("error: internal invariant violated");
            3
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let (common, report) = match &cli.command {
        Command::Validate(c) => (c, validate(c)?),
        Command::Fedosov(c) => (c, fedosov(c)?),
        Command::Atiyah(c) => (c, atiyah(c)?),
        Command::Verify { common, suite, seed } => (common, verify(common, (*suite).into(), *seed)?),
    };
    emit(common, &report)?;
    Ok(if report.passed { 0 } else { 1 })
}

fn emit(common: &Common, report: &Report) -> Result<(), CliError> {
    let body = match common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &common.output {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

struct Timer {
    enabled: bool,
    start: Instant,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer {
            enabled,
            start: Instant::now(),
        }
    }

    fn lap(&mut self, report: &mut Report, phase: &str) {
        if self.enabled {
            report.record_timing(phase, self.start.elapsed().as_secs_f64() * 1e3);
        }
        self.start = Instant::now();
    }
}

fn order(common: &Common) -> Result<TruncationOrder, CliError> {
    TruncationOrder::new(common.max_b_degree).map_err(|e| CliError::Usage(e.to_string()))
}

fn new_report(name: &str, common: &Common) -> Report {
    Report::new(name, common.input.display().to_string(), common.max_b_degree)
}

fn load(common: &Common, validate: bool) -> Result<ChartAlgebroid, CliError> {
    let bindings = gamma_binding(common.gamma_param.clone());
    let path: &Path = &common.input;
    Ok(if validate {
        load_algebroid(path, &bindings)?
    } else {
        load_unvalidated(path, &bindings)?
    })
}

fn summary(alg: &ChartAlgebroid) -> Section {
    let dims = alg.dims();
    let mut s = Section::new("algebroid");
    s.push("dim_base", dims.n.to_string());
    s.push("rank_B", dims.s.to_string());
    s.push("rank_A", dims.t.to_string());
    s.push("variables", alg.variables().join(", "));
    s.push("matched_pair", alg.is_matched_pair().to_string());
    s
}

fn validate(common: &Common) -> Result<Report, CliError> {
    let mut report = new_report("validate", common);
    let mut timer = Timer::new(common.timings);
    let alg = load(common, false)?;
    timer.lap(&mut report, "load");
    report.add_section(summary(&alg));
    report.add_checks(alg.validate_structure());
    timer.lap(&mut report, "validate");
    Ok(report)
}

fn d_section(title: &str, d: &crate::graded::Derivation, names: &[String]) -> Section {
    let mut s = Section::new(title);
    for g in d.dims().generators() {
        s.push(g.to_string(), d.value(g).display_with(names));
    }
    s
}

fn fedosov_sections(fd: &FedosovData) -> Vec<Section> {
    let names = fd.algebroid().variables();
    let mut out = Vec::new();
    let mut x = Section::new("X");
    for (k, xk) in fd.x_parts() {
        for (l, c) in xk.components().iter().enumerate() {
            x.push(format!("X_{k}^{}", l + 1), c.display_with(names));
        }
    }
    out.push(x);
    out.push(d_section("D", fd.d(), names));
    if let Ok((da, db)) = fd.split() {
        out.push(d_section("D_A", da, names));
        out.push(d_section("D_B", db, names));
    }
    out
}

fn fedosov(common: &Common) -> Result<Report, CliError> {
    let mut report = new_report("fedosov", common);
    let mut timer = Timer::new(common.timings);
    let n = order(common)?;
    let alg = load(common, true)?;
    timer.lap(&mut report, "load");
    let fd = fedosov_x(&alg, n)?;
    timer.lap(&mut report, "construct");
    report.add_section(summary(&alg));
    for s in fedosov_sections(&fd) {
        report.add_section(s);
    }
    report.add_checks(fedosov_suite(&alg, n));
    timer.lap(&mut report, "checks");
    Ok(report)
}

fn atiyah(common: &Common) -> Result<Report, CliError> {
    let mut report = new_report("atiyah", common);
    let mut timer = Timer::new(common.timings);
    let n = order(common)?;
    let alg = load(common, true)?;
    timer.lap(&mut report, "load");
    let names = alg.variables();
    report.add_section(summary(&alg));

    let lp = atiyah_lie_pair(&alg);
    let mut s = Section::new("lie_pair_cocycle");
    for (a, j, k, l, v) in lp.nonzero() {
        s.push(format!("[a{};{},{}->{}]", a + 1, j + 1, k + 1, l + 1), v.display_with(names));
    }
    report.add_section(s);
    let mut checks = ValidationReport::new();
    if alg.is_matched_pair() {
        let r = lie_pair_closure(&alg)?;
        checks.push(if r.is_zero() {
            Check::pass("lie_pair_cocycle_closed")
        } else {
            Check::fail("lie_pair_cocycle_closed", "d_A(At)", r.display_with(names))
        });
    }

    let fd = atiyah_data(&alg, n)?;
    let w = n.window();
    let flat = DConnection::flat();
    let at = atiyah_dg(&fd, &flat)?;
    timer.lap(&mut report, "construct");
    let mut s = Section::new("dg_cocycle");
    let rank = alg.dims().s;
    for i in 0..rank {
        for j in 0..rank {
            for k in 0..rank {
                let v = at.get(i, j, k).truncate(w);
                if !v.is_zero() {
                    s.push(format!("[{},{}->{}]", i + 1, j + 1, k + 1), v.display_with(names));
                }
            }
        }
    }
    report.add_section(s);
    let closed = at.lie_upto(fd.d(), w);
    checks.push(if closed.is_zero() {
        Check::pass("dg_cocycle_closed")
    } else {
        Check::fail("dg_cocycle_closed", "Q(At)", closed.display_with(names))
    });
    checks.extend(check_theorem2(&fd, &flat)?);
    report.add_checks(checks);
    timer.lap(&mut report, "checks");
    Ok(report)
}

fn verify(common: &Common, suite: Suite, seed: u64) -> Result<Report, CliError> {
    let mut report = new_report("verify", common);
    let mut timer = Timer::new(common.timings);
    let n = order(common)?;
    let alg = load(common, false)?;
    timer.lap(&mut report, "load");
    report.add_section(summary(&alg));
    let cfg = SuiteConfig::new(n).with_seed(seed);
    report.add_checks(run_suite(&alg, suite, &cfg));
    timer.lap(&mut report, "suites");
    Ok(report)
}
