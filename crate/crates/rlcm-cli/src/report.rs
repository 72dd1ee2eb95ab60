use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::commands::Outcome;
use crate::config::{Format, JobConfig};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Report<'a> {
    pub schema_version: u32,
    pub config: &'a JobConfig,
    pub results: &'a [Value],
    pub warnings: &'a [String],
    /// Any check failed.
    pub failed: bool,
    /// Unix seconds; only present when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

pub fn render(cfg: &JobConfig, outcome: &Outcome) -> Result<String, CliError> {
    match cfg.output.format {
        Format::Json => {
            let timestamp = cfg.output.timestamp.then(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs())
            });
            let report = Report {
                schema_version: SCHEMA_VERSION,
                config: cfg,
                results: &outcome.results,
                warnings: &outcome.warnings,
                failed: outcome.failed,
                timestamp,
            };
            let mut text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let table = outcome.table.as_ref().ok_or_else(|| CliError::Validation {
                field: "format".into(),
                constraint: "this job produced no table".into(),
            })?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(&table.header).map_err(io)?;
            for row in &table.rows {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Writes to the configured path through a temporary file in the same
/// directory, or to standard output.
pub fn write(cfg: &JobConfig, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match &cfg.output.path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => std::path::PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.flush().map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}
