//! Command-line workbench. Data goes to standard output, diagnostics to
//! standard error. Exit codes: 0 success, 1 validation or domain error,
//! 2 usage error, 3 I/O error.

mod commands;
mod table;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const CATALOG_ENV: &str = "ALGOFIT_CATALOG";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ChainOutput {
    Table,
    /// Same as `canonical`.
    Machine,
    #[default]
    Canonical,
    WorkflowXml,
}

#[derive(Debug, Args)]
pub struct CatalogArg {
    /// Catalog file; the built-in seed catalog when absent.
    #[arg(long, env = CATALOG_ENV)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Field delimiter (a single character, or `\t`).
    #[arg(long, default_value = ",")]
    pub delimiter: String,
    /// Label column, left out of feature checks and used for class balance.
    #[arg(long)]
    pub label: Option<String>,
    /// Cell value read as null; repeatable. Empty cells are always null.
    #[arg(long = "null-token")]
    pub null_tokens: Vec<String>,
    /// The first row is data, not column names.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "algofit",
    version,
    about = "Rank machine-learning algorithm families against project requirements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Catalog maintenance.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Profile a delimited data file.
    Profile {
        data: PathBuf,
        #[command(flatten)]
        data_args: DataArgs,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Rank catalog families for a project.
    Rank {
        project: PathBuf,
        #[command(flatten)]
        catalog: CatalogArg,
        #[arg(long)]
        top: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Per-requirement breakdown of one family's score.
    Explain {
        project: PathBuf,
        #[arg(long)]
        family: String,
        #[command(flatten)]
        catalog: CatalogArg,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Rankings before and after in-memory overrides. The project file is
    /// never written.
    Whatif {
        project: PathBuf,
        /// `care.<requirement>=<level>` or `value.<requirement>=<value>`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[command(flatten)]
        catalog: CatalogArg,
        #[arg(long)]
        top: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Processing chain for a family, with compensation steps.
    Pipeline {
        project: PathBuf,
        #[arg(long)]
        family: String,
        /// Data file to profile for the compensation rules.
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        data_args: DataArgs,
        #[command(flatten)]
        catalog: CatalogArg,
        #[arg(long, value_enum, default_value_t)]
        format: ChainOutput,
    },
    /// Agreement between engine rankings and expert rankings.
    Agreement {
        /// Expert ranking file.
        #[arg(long)]
        rankings: PathBuf,
        /// Project files the rankings refer to.
        #[arg(required = true)]
        projects: Vec<PathBuf>,
        #[command(flatten)]
        catalog: CatalogArg,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "ALGOFIT_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = "ALGOFIT_STORE", default_value = "algofit-store")]
        store_dir: PathBuf,
        /// Largest accepted request body, in bytes.
        #[arg(long, default_value_t = algofit_service::DEFAULT_MAX_UPLOAD)]
        max_upload: usize,
        /// Allowed cross-origin origin; repeatable. Any origin when absent.
        #[arg(long = "cors-origin")]
        cors_origins: Vec<String>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// Check a catalog file against every catalog rule.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
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
    let mut out = std::io::stdout().lock();
    match commands::dispatch(cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
