//! Command-line front end: parses operator, matrix and series files,
//! dispatches to `opmodel` and assembles deterministic reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for
//! unreadable or malformed input, 3 for numeric failures.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opmodel::{Tolerances, C64};
use thiserror::Error;

mod commands;
pub mod input;
pub mod report;

use report::{Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{op} failed: {source}")]
    Numeric {
        op: &'static str,
        #[source]
        source: opmodel::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric { .. } => 3,
        }
    }
}

/// Tags a core error with the name of the operation that raised it.
pub(crate) trait NumericContext<T> {
    fn during(self, op: &'static str) -> Result<T, CliError>;
}

impl<T> NumericContext<T> for opmodel::Result<T> {
    fn during(self, op: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Numeric { op, source })
    }
}

#[derive(Debug, Parser)]
#[command(name = "opmodel", version, about = "Operator-model computations with verifiable reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Relative singular-value cutoff.
    #[arg(long, global = true, value_parser = input::parse_positive)]
    pub tol_rank: Option<f64>,
    /// Eigenvalue slack for semidefiniteness tests.
    #[arg(long, global = true, value_parser = input::parse_positive)]
    pub tol_psd: Option<f64>,
    /// Allowed norm residual for identities.
    #[arg(long, global = true, value_parser = input::parse_positive)]
    pub tol_residual: Option<f64>,
    /// Allowed truncated-series tail.
    #[arg(long, global = true, value_parser = input::parse_positive)]
    pub tol_tail: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concavity class, boundedness below, purity and wandering subspace.
    Classify(ClassifyArgs),
    /// Matrix semigroups: evolution, cogenerator, growth bound, concavity equivalence.
    Semigroup(SemigroupArgs),
    /// Analytic model of a bounded below, pure shift.
    Model(ModelArgs),
    /// Power series, Blaschke products, model spaces and Caradus certificates.
    Hardy(HardyArgs),
    /// Full acceptance suite plus the bundled fixture checks.
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    BoundedBelow,
    Concave,
    TwoIsometry,
    TwoContraction,
    Pure,
    Wandering,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Operator JSON file.
    #[arg(long)]
    pub operator: PathBuf,
    /// Properties that must hold; each becomes a check.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub expect: Vec<Property>,
}

#[derive(Debug, Args)]
pub struct SemigroupArgs {
    /// Generator matrix JSON file.
    #[arg(long)]
    pub generator: PathBuf,
    /// Times at which to evaluate `exp(tA)`.
    #[arg(long = "t", value_delimiter = ',', value_parser = input::parse_nonnegative)]
    pub times: Vec<f64>,
    /// Compute `V = (A + I)(A - I)^{-1}` and check the round trip back to `A`.
    #[arg(long)]
    pub cogenerator: bool,
    /// Compute the growth bound and check its log-limit consistency.
    #[arg(long)]
    pub growth_bound: bool,
    /// Evaluate the four concavity conditions and check that they agree.
    #[arg(long)]
    pub equivalence_suite: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelCheck {
    Intertwine,
    Reproduce,
    Semigroup,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Operator JSON file (weighted shift or direct sum of shifts).
    #[arg(long)]
    pub operator: PathBuf,
    /// Vector JSON file `{"ambient": null, "data": [[re, im], ...]}`.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Kernel evaluation point `lambda,z`.
    #[arg(long, value_parser = input::parse_complex_pair)]
    pub kernel: Option<(C64, C64)>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub verify: Vec<ModelCheck>,
    /// Truncation order of coefficient expansions.
    #[arg(long = "N", visible_alias = "order", default_value_t = 64)]
    pub order: usize,
    /// Point of the reproducing check.
    #[arg(long, value_parser = input::parse_complex, default_value = "0.3")]
    pub lambda: C64,
    /// Time of the semigroup check.
    #[arg(long = "t", value_parser = input::parse_nonnegative, default_value_t = 1.0)]
    pub time: f64,
}

#[derive(Debug, Args)]
pub struct HardyArgs {
    /// Zeros of a finite Blaschke product, e.g. "0.3,-0.4" or "0.2+0.1i".
    #[arg(long, value_parser = input::parse_complex_list, conflicts_with = "symbol_file")]
    pub blaschke: Option<input::ComplexList>,
    /// Coefficient array `[[re, im], ...]` or `{"zeros": [[re, im], ...]}`.
    #[arg(long)]
    pub symbol_file: Option<PathBuf>,
    /// Truncation order of series.
    #[arg(long, default_value_t = 4096)]
    pub order: usize,
    /// Build `exp(t (phi + 1)/(phi - 1))` and check it on circles.
    #[arg(long, value_parser = input::parse_nonnegative)]
    pub semigroup_t: Option<f64>,
    /// Check the symbol itself on circles.
    #[arg(long)]
    pub inner_check: bool,
    /// Points per circle in circle checks.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Model space basis from an `n x n` Toeplitz truncation.
    #[arg(long, value_name = "N")]
    pub model_space: Option<usize>,
    /// Ladder decomposition with this many levels.
    #[arg(long, value_name = "M")]
    pub ladder: Option<usize>,
    /// Truncation dimension of the ladder check.
    #[arg(long, default_value_t = 64)]
    pub ladder_n: usize,
    /// Caradus certificates for the block shifts of this multiplicity.
    #[arg(long, value_name = "D")]
    pub caradus: Option<usize>,
    /// Truncation dimension of the Caradus check (default `8 D`).
    #[arg(long)]
    pub caradus_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyAllArgs {
    /// Run only these acceptance criteria.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    /// Read fixtures from this directory instead of the bundled copies.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
}

impl Cli {
    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let d = Tolerances::default();
        Tolerances::new(
            self.tol_rank.unwrap_or(d.rank_tol),
            self.tol_psd.unwrap_or(d.psd_tol),
            self.tol_residual.unwrap_or(d.residual_tol),
            self.tol_tail.unwrap_or(d.tail_tol),
        )
        .map_err(|e| CliError::Input(e.to_string()))
    }
}

/// Runs a parsed command and returns its finished report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let tol = cli.tolerances()?;
    let mut report = match &cli.command {
        Command::Classify(a) => commands::classify(a, &tol)?,
        Command::Semigroup(a) => commands::semigroup(a, &tol)?,
        Command::Model(a) => commands::model(a, &tol)?,
        Command::Hardy(a) => commands::hardy(a, &tol)?,
        Command::VerifyAll(a) => commands::verify_all(a, &tol)?,
    };
    report.finish();
    Ok(report)
}

/// Parses `argv`, runs the command, writes the report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let rendered = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(rendered.as_bytes()).map_err(|e| format!("cannot write report: {e}"))
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return 2;
    }
    for c in report.checks.iter().filter(|c| c.status == Status::Fail) {
        eprintln!("check failed: {} (value {:e}, tolerance {:e})", c.name, c.value, c.tolerance);
    }
    match report.verdict {
        Status::Pass => 0,
        Status::Fail => 1,
    }
}
