//! On-disk formats: embedding matrices (CSV and a packed binary layout),
//! run manifests with a sidecar configuration, and JSON reports.
//!
//! Every writer produces byte-identical output for identical inputs —
//! `\n` line endings, `.` decimal separators, fixed key order — and goes
//! through a temp-file-plus-rename so a crash never leaves a half-written
//! file behind. Row and column positions in errors are 1-based; 0 means
//! the problem concerns the file as a whole.

mod embedding_io;
mod report_io;
mod runs_io;

pub use embedding_io::{load_embedding, save_embedding, FileFormat};
pub use report_io::{render_json, write_json};
pub use runs_io::{load_runs_config, load_runs_manifest, RunsConfig};

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Write `bytes` to `path` atomically via a sibling temp file and rename.
pub(crate) fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut file = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    file.write_all(bytes).map_err(|e| Error::io(path, e))?;
    file.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
