//! Run manifests and their sidecar configuration.
//!
//! A manifest is a delimited text table (comma or tab, detected from the
//! header line) with one row per training run. It must have a `run_id`
//! column; the sidecar TOML config declares which of the remaining columns
//! are unsupervised metrics and which are downstream task scores, along
//! with per-metric orientation and the correlation mode. Columns mentioned
//! in neither list are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{Aggregation, CorrelationMode, Orientation, RunRecord, RunTable};

/// Sidecar configuration for [`load_runs_manifest`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunsConfig {
    /// Manifest columns holding unsupervised metric values.
    pub metrics: Vec<String>,
    /// Manifest columns holding downstream task scores.
    pub tasks: Vec<String>,
    /// Per-metric orientation; metrics not listed default to higher-is-better.
    #[serde(default)]
    pub orientation: BTreeMap<String, Orientation>,
    #[serde(default)]
    pub correlation_mode: CorrelationMode,
    #[serde(default)]
    pub aggregation: Aggregation,
}

/// Load and validate a TOML sidecar config.
pub fn load_runs_config(path: &Path) -> Result<RunsConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let config: RunsConfig = toml::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if config.metrics.is_empty() || config.tasks.is_empty() {
        return Err(Error::Config(format!(
            "{}: at least one metric and one task column are required",
            path.display()
        )));
    }
    let metric_set: BTreeSet<&String> = config.metrics.iter().collect();
    for task in &config.tasks {
        if metric_set.contains(task) {
            return Err(Error::Config(format!(
                "{}: column {task:?} is listed as both a metric and a task",
                path.display()
            )));
        }
    }
    Ok(config)
}

/// Parse a run manifest into a [`RunTable`] using the sidecar config.
pub fn load_runs_manifest(path: &Path, config: &RunsConfig) -> Result<RunTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty());

    let Some((_, header_line)) = lines.next() else {
        return Err(Error::Parse {
            path: path.into(),
            row: 0,
            col: 0,
            msg: "manifest has no header line".to_owned(),
        });
    };
    let delimiter = if header_line.contains('\t') { '\t' } else { ',' };
    let headers: Vec<&str> = header_line.split(delimiter).map(str::trim).collect();
    let mut seen = BTreeSet::new();
    for (col_idx, header) in headers.iter().enumerate() {
        if !seen.insert(*header) {
            return Err(Error::Parse {
                path: path.into(),
                row: 1,
                col: col_idx + 1,
                msg: format!("duplicate column {header:?}"),
            });
        }
    }
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| Error::MissingColumn { name: name.to_owned() })
    };
    let id_col = column("run_id")?;
    let metric_cols: Vec<(String, usize)> = config
        .metrics
        .iter()
        .map(|name| Ok((name.clone(), column(name)?)))
        .collect::<Result<_>>()?;
    let task_cols: Vec<(String, usize)> = config
        .tasks
        .iter()
        .map(|name| Ok((name.clone(), column(name)?)))
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    for (idx, line) in lines {
        let row_no = idx + 1;
        let fields: Vec<&str> = line.split(delimiter).map(str::trim).collect();
        if fields.len() != headers.len() {
            return Err(Error::Shape {
                path: path.into(),
                row: row_no,
                expected: headers.len(),
                got: fields.len(),
            });
        }
        let parse_cell = |col: usize| -> Result<f64> {
            let value = f64::from_str(fields[col]).map_err(|e| Error::Parse {
                path: path.into(),
                row: row_no,
                col: col + 1,
                msg: format!("{:?}: {e}", fields[col]),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    path: path.into(),
                    row: row_no,
                    col: col + 1,
                });
            }
            Ok(value)
        };
        let run_id = fields[id_col].to_owned();
        if run_id.is_empty() {
            return Err(Error::Parse {
                path: path.into(),
                row: row_no,
                col: id_col + 1,
                msg: "empty run_id".to_owned(),
            });
        }
        let mut unsup = BTreeMap::new();
        for (name, col) in &metric_cols {
            unsup.insert(name.clone(), parse_cell(*col)?);
        }
        let mut downstream = BTreeMap::new();
        for (name, col) in &task_cols {
            downstream.insert(name.clone(), parse_cell(*col)?);
        }
        records.push(RunRecord {
            run_id,
            unsup,
            downstream,
        });
    }

    RunTable::new(records, config.orientation.clone(), config.correlation_mode)
}
