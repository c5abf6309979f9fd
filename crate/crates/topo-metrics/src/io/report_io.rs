//! JSON report rendering.
//!
//! Reports are pretty-printed JSON with a trailing newline. Key order comes
//! from struct field order (or sorted map keys), so rendering the same data
//! twice yields the same bytes.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::atomic_write;

/// Render a report as deterministic JSON text.
pub fn render_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("could not serialize report: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Render a report and write it to `path` atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    atomic_write(path, render_json(value)?.as_bytes())
}
