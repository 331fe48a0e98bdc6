//! Scenario files, the runs they describe, and their CSV outputs.

mod config;
mod output;
mod run;

pub use config::{
    parse_config, parse_number, Mode, RawConfig, ScenarioConfig, KNOWN_KEYS, MIN_SYMMETRY_SNAPSHOTS,
};
pub use output::{format_number, CsvTable};
pub use run::{run, RunSummary};

use thiserror::Error;

use crate::error::{AnalysisError, SimilarityError, SolverError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    /// Malformed input; `line` is 0 for command-line overrides.
    #[error("line {line}{}: {message}", key.as_ref().map(|k| format!(" ({k})")).unwrap_or_default())]
    Parse {
        line: usize,
        key: Option<String>,
        message: String,
    },
    #[error("{key}: {message}")]
    Validation { key: String, message: String },
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    /// Process exit status: 2 for configuration errors, 3 for numerical
    /// failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Parse { .. } | ScenarioError::Validation { .. } => 2,
            ScenarioError::Similarity(_)
            | ScenarioError::Solver(_)
            | ScenarioError::Analysis(_) => 3,
            ScenarioError::Io { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioError::Parse { .. } => "parse",
            ScenarioError::Validation { .. } => "validation",
            ScenarioError::Similarity(_) => "similarity",
            ScenarioError::Solver(_) => "solver",
            ScenarioError::Analysis(_) => "analysis",
            ScenarioError::Io { .. } => "io",
        }
    }

    /// Single-line JSON description for machine consumers.
    pub fn to_json(&self) -> String {
        let mut obj = serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        match self {
            ScenarioError::Parse { line, key, .. } => {
                obj["line"] = (*line).into();
                if let Some(k) = key {
                    obj["key"] = k.as_str().into();
                }
            }
            ScenarioError::Validation { key, .. } => obj["key"] = key.as_str().into(),
            _ => {}
        }
        obj.to_string()
    }
}
