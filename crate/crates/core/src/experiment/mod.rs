//! Config-driven experiment runs behind the CLI commands.
//!
//! Each run consumes a JSON configuration, produces a single JSON document
//! (schema version "1", embedding the resolved configuration) plus an
//! optional CSV artifact, and settles on a status that maps onto process
//! exit codes: pass, statistical failure, or degenerate limit.
//!
//! Output bytes are a pure function of the configuration: no timestamps,
//! no thread counts, no machine identifiers.

pub mod config;
pub mod output;
pub mod runner;

use serde::Serialize;

pub use config::{load_config, CltConfig, ExactConfig, SubsetIdentityCheck, Theorem1Config,
    ZonoidConfig, ZonotopeConfig};
pub use output::write_artifacts;
pub use runner::{run_clt, run_exact, run_theorem1, run_zonoid};

/// Outcome class of a run, mapped onto process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Pass,
    /// The computation succeeded but a configured check failed.
    StatisticalFailure,
    /// The limiting variance is consistent with zero, so the distributional
    /// checks are vacuous.
    Degenerate,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Pass => 0,
            RunStatus::StatisticalFailure => 1,
            RunStatus::Degenerate => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Pass => "pass",
            RunStatus::StatisticalFailure => "statistical_failure",
            RunStatus::Degenerate => "degenerate",
        }
    }
}

/// One named pass/fail criterion evaluated by a run.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub observed: f64,
    pub threshold: f64,
}

/// Tabular artifact accompanying the JSON document.
#[derive(Clone, Debug)]
pub struct CsvArtifact {
    pub name: &'static str,
    /// Compact JSON of the resolved configuration, echoed as a `# config`
    /// comment line.
    pub config_line: String,
    pub header: &'static str,
    pub rows: Vec<String>,
}

/// Everything a run produces, ready to be written and reported.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub command: &'static str,
    /// The complete JSON document, including schema version, resolved
    /// configuration, report body, checks, and status.
    pub report: serde_json::Value,
    pub csv: Option<CsvArtifact>,
    pub checks: Vec<Check>,
    pub status: RunStatus,
}
