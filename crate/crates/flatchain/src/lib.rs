//! File formats, reports and the batch command runner behind the `flatchain`
//! binary.

pub mod commands;
pub mod io;
pub mod report;

use flatchain_core::ErrorKind;

pub use commands::{run, Cli, Command, Outcome};
pub use io::{parse_chain_file, ChainFile, Parsed};
pub use report::{emit_report, Cell, Format, Table};

pub const EXIT_INVARIANT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_TRANSVERSALITY: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("field `{field}` {constraint}")]
    Schema { field: String, constraint: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Violation(String),
    #[error(transparent)]
    Core(#[from] flatchain_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Schema { .. } | CliError::Usage(_) => EXIT_USAGE,
            CliError::Violation(_) => EXIT_INVARIANT,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Invariant => EXIT_INVARIANT,
                ErrorKind::Transversality => EXIT_TRANSVERSALITY,
                ErrorKind::Input | ErrorKind::Unsupported => EXIT_USAGE,
            },
        }
    }
}
