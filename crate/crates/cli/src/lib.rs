//! Command-line front end for `colorcap`.
//!
//! Every command reads one system document (`--input`, default stdin) and
//! writes one JSON document (`--output`, default stdout). Exit codes: 0 on
//! success, 2 for schema errors, 3 when enumeration would exceed the budget,
//! 4 for inconsistent reconstruction input, 1 for anything else.

pub mod commands;
pub mod document;
pub mod format;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use colorcap::oracle::{EnumerationConfig, DEFAULT_BUDGET};

pub use document::{parse_system, ResultDocument, SystemDocument, TableDocument, ViewsDocument};

pub const BUDGET_ENV: &str = "COLORCAP_BUDGET";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("budget refused: {0}")]
    Budget(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Reconstruction(_) => 4,
            CliError::Unsupported(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "colorcap", version, about = "Capacities of coloring-channel systems")]
pub struct Cli {
    /// System document to read, `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    pub input: String,
    /// Where to write the result, `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    pub output: String,
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Which {
    Q3,
    Q4,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the system.
    Classify,
    /// Exact capacity or bounds, with the witness.
    Capacity,
    /// Clique bounds, plus cycle bounds for cycles.
    Bounds,
    /// Count distinct outputs by exhaustive enumeration.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Report every length from 1 to n.
        #[arg(long)]
        sweep: bool,
        /// Also count outputs of the pairs-graph system and compare.
        #[arg(long)]
        verify_pairs: bool,
        /// Maximum number of words to enumerate.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Rebuild a channel's view from its pair views.
    Reconstruct {
        /// 1-based index of the channel.
        #[arg(long)]
        channel: usize,
        #[arg(long)]
        views: PathBuf,
    },
    /// Write the pair views of a word for one channel.
    Project {
        /// 1-based index of the channel.
        #[arg(long)]
        channel: usize,
        /// Letters as digits (`3121`) or comma-separated (`3,12,1`).
        #[arg(long)]
        word: String,
    },
    /// Recompute the capacity catalogue for q = 3 or q = 4.
    Table {
        #[arg(long, value_enum)]
        which: Which,
    },
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Writes `text` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial document.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit<T: Serialize>(output: &str, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    if output == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Io(format!("stdout: {e}")))
    } else {
        write_atomic(Path::new(output), &text)
    }
}

/// Budget precedence: explicit flag, then `COLORCAP_BUDGET`, then the default.
pub fn resolve_budget(flag: Option<u64>, env: Option<OsString>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match env {
        None => Ok(DEFAULT_BUDGET),
        Some(v) => v
            .to_str()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| {
                CliError::Schema(format!("{BUDGET_ENV}: expected a non-negative integer, found {v:?}"))
            }),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if cli.workers == Some(0) {
        return Err(CliError::Schema("--workers: must be at least 1".into()));
    }
    if let Command::Table { which } = cli.command {
        let which = match which {
            Which::Q3 => "q3",
            Which::Q4 => "q4",
        };
        return emit(&cli.output, &commands::cmd_table(which)?);
    }
    let (doc, system) = parse_system(&read_input(&cli.input)?)?;
    match cli.command {
        Command::Classify => emit(&cli.output, &commands::cmd_classify(doc, &system)),
        Command::Capacity => emit(&cli.output, &commands::cmd_capacity(doc, &system)),
        Command::Bounds => emit(&cli.output, &commands::cmd_bounds(doc, &system)?),
        Command::Enumerate {
            n,
            sweep,
            verify_pairs,
            budget,
        } => {
            let config = EnumerationConfig {
                budget: resolve_budget(budget, std::env::var_os(BUDGET_ENV))?,
                workers: cli.workers,
            };
            let out = commands::cmd_enumerate(doc, &system, n, sweep, verify_pairs, &config)?;
            emit(&cli.output, &out)
        }
        Command::Reconstruct { channel, views } => {
            let text = std::fs::read_to_string(&views)
                .map_err(|e| CliError::Io(format!("{}: {e}", views.display())))?;
            let views = document::parse_views(&text, system.q())?;
            emit(&cli.output, &commands::cmd_reconstruct(doc, &system, channel, &views)?)
        }
        Command::Project { channel, word } => {
            emit(&cli.output, &commands::cmd_project(&system, channel, &word)?)
        }
        Command::Table { .. } => unreachable!("handled above"),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("colorcap: {e}");
            e.exit_code()
        }
    }
}
