//! Convergence studies on top of `fracfem`: configuration, execution and
//! table output. The `fracfem` binary is a thin wrapper around this crate.

mod config;
mod experiment;
mod expr;
mod table;

pub use config::{ExampleKind, ExperimentConfig, GradingKind, MethodKind, OutputFormat, QKind};
pub use experiment::{run_experiment, CellReport, StudyReport};
pub use expr::{Expr, ParseError};
pub use table::{csv_rows, emit_table, parse_csv, CsvRow, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Expr(#[from] ParseError),
    #[error(transparent)]
    Solver(#[from] fracfem::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}
