//! Command-line front end: argument parsing, dispatch and exit codes.
//!
//! Exit codes are 0 on success, 2 for usage and data errors, and 3 for
//! numerical failures.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use influence::data::{self, ColumnRef, Dataset};
use influence::Error;

pub mod render;
pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "influence", version, about = "Leave-one-out influence diagnostics for linear regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SortKey {
    Index,
    KAbsDesc,
    CookDesc,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,

    /// Decimal places for rendered numbers (1 to 12).
    #[arg(long, global = true, default_value_t = 3,
          value_parser = clap::value_parser!(u8).range(1..=12))]
    pub precision: u8,

    /// Row order of the diagnostics table.
    #[arg(long, global = true, value_enum, default_value = "index")]
    pub sort: SortKey,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Bundled dataset name (see list-datasets) or path to a CSV file.
    pub source: String,

    /// Response column: header name or 1-based position. Defaults to the
    /// last column.
    #[arg(long)]
    pub response: Option<String>,

    /// Fit without an intercept column.
    #[arg(long)]
    pub no_intercept: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-observation residual, leverage, t², Cook's distance and K.
    Diagnose(SourceArgs),

    /// Cook's distance of one observation split along the eigenvectors of XᵀX.
    Decompose {
        #[command(flatten)]
        source: SourceArgs,
        /// 1-based observation index.
        index: usize,
    },

    /// Evaluate the two chi-squared conditions for a dataset or for a
    /// synthetic observation of given leverage.
    CheckChisq {
        #[arg(required_unless_present = "leverage")]
        source: Option<String>,
        /// Restrict the report to one 1-based observation.
        index: Option<usize>,
        #[arg(long)]
        response: Option<String>,
        #[arg(long)]
        no_intercept: bool,
        #[arg(long, conflicts_with_all = ["source", "index"])]
        leverage: Option<f64>,
    },

    /// Simulate the quadratic form at a leverage and test it against
    /// chi-squared(1).
    Simulate {
        #[arg(long)]
        leverage: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },

    /// Bundled datasets with their sizes and checksums.
    ListDatasets,
}

/// Resolves a bundled name or a CSV path.
pub fn load_source(source: &str, response: Option<&str>, intercept: bool) -> influence::Result<Dataset> {
    let column = match response {
        Some(r) => r.parse::<ColumnRef>()?,
        None => ColumnRef::Last,
    };
    let is_builtin = data::BUILTIN_NAMES
        .iter()
        .any(|n| n.eq_ignore_ascii_case(source.trim()));
    if is_builtin {
        data::builtin_with(source, &column, intercept)
    } else if Path::new(source).exists() || source.contains(['/', '.']) {
        data::load_csv(source, &column, intercept)
    } else {
        Err(Error::UnknownDataset(source.to_string()))
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

/// Runs a parsed command, writing the rendered result to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> influence::Result<()> {
    let opts = &cli.output;
    let text = match &cli.command {
        Command::Diagnose(src) => {
            let ds = load_source(&src.source, src.response.as_deref(), !src.no_intercept)?;
            let rep = report::diagnose(&ds, opts.sort)?;
            render::diagnose(&rep, opts)
        }
        Command::Decompose { source, index } => {
            let ds = load_source(&source.source, source.response.as_deref(), !source.no_intercept)?;
            let rep = report::decompose(&ds, *index)?;
            render::decompose(&rep, opts)
        }
        Command::CheckChisq {
            source,
            index,
            response,
            no_intercept,
            leverage,
        } => {
            let rep = match (leverage, source) {
                (Some(h), _) => report::check_chisq_leverage(*h)?,
                (None, Some(src)) => {
                    let ds = load_source(src, response.as_deref(), !no_intercept)?;
                    report::check_chisq(&ds, *index)?
                }
                (None, None) => unreachable!("clap requires a source or --leverage"),
            };
            render::check_chisq(&rep, opts)
        }
        Command::Simulate {
            leverage,
            samples,
            seed,
        } => {
            let rep = report::simulate(*leverage, *samples, *seed)?;
            render::simulate(&rep, opts)
        }
        Command::ListDatasets => render::datasets(&report::datasets()?, opts),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Io(e.to_string()))
}

/// Parses `args`, runs the command on stdout and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
