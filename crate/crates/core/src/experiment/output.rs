//! Writers for run artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::RunArtifacts;

/// Writes the JSON document (and the CSV artifact, when present) under
/// `dir`, creating it if needed, and returns the paths written. Contents are
/// a pure function of the artifact values.
pub fn write_artifacts(artifacts: &RunArtifacts, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let json_path = dir.join(format!("{}.json", artifacts.command));
    let mut text = serde_json::to_string_pretty(&artifacts.report)
        .map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    fs::write(&json_path, text)?;
    written.push(json_path);

    if let Some(csv) = &artifacts.csv {
        let csv_path = dir.join(csv.name);
        let mut out = String::with_capacity(csv.rows.len() * 24 + 256);
        out.push_str("# config ");
        out.push_str(&csv.config_line);
        out.push('\n');
        out.push_str(csv.header);
        out.push('\n');
        for row in &csv.rows {
            out.push_str(row);
            out.push('\n');
        }
        fs::write(&csv_path, out)?;
        written.push(csv_path);
    }

    Ok(written)
}
