//! Scenario configuration, terrain generators, log emission and run
//! summaries.

mod config;
mod output;
mod summary;
mod terrain;

pub use config::{
    load_config, parse_config, serialize_config, Features, ObserverConfig, RandomSteps, ScenarioConfig, SimSettings,
    TerrainConfig, TerrainKind, VelocityRow, WrenchConfig, WrenchEvent,
};
pub use output::{
    emit_log, events_csv, format_sig, log_columns, log_csv, observer_csv, plot_csv, plot_data, EmittedFiles,
    CSV_SCHEMA, OBSERVER_COLUMNS,
};
pub use summary::RunSummary;
pub use terrain::{build_terrain, generate_terrain};

use crate::terrain::TerrainError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid `{field}`: {msg}")]
    Invalid { field: String, msg: String },
    #[error("unknown channel `{name}`; available: {}", available.join(", "))]
    UnknownChannel { name: String, available: Vec<String> },
    #[error("malformed log: {0}")]
    MalformedLog(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Terrain(#[from] TerrainError),
}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> Self {
        IoError::Io(e.to_string())
    }
}
