//! Loading and saving embedding matrices.
//!
//! CSV files are comma-separated floats, one point per row, with an
//! optional header: the first line is treated as a header exactly when
//! none of its fields parses as a float. Values are written with 17
//! significant digits, enough to round-trip any double exactly.
//!
//! The binary layout is the 8-byte magic `EMBMAT01`, then row and column
//! counts as little-endian `u32`, then row-major values as little-endian
//! `f64`. The file length must match the header exactly.

use std::path::Path;
use std::str::FromStr;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::io::atomic_write;

const MAGIC: &[u8; 8] = b"EMBMAT01";
const HEADER_LEN: usize = 16;

/// Embedding file encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Binary,
}

impl FileFormat {
    /// Pick a format from the file extension: `.bin` means binary,
    /// anything else CSV.
    pub fn infer(path: &Path) -> Self {
        match path.extension() {
            Some(ext) if ext == "bin" => Self::Binary,
            _ => Self::Csv,
        }
    }
}

impl FromStr for FileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "bin" => Ok(Self::Binary),
            other => Err(Error::BadParams(format!(
                "unknown format `{other}`; expected csv or bin"
            ))),
        }
    }
}

/// Read an embedding matrix from `path`.
pub fn load_embedding(path: &Path, format: FileFormat) -> Result<EmbeddingMatrix> {
    match format {
        FileFormat::Csv => load_csv(path),
        FileFormat::Binary => load_binary(path),
    }
}

/// Write an embedding matrix to `path`, atomically.
pub fn save_embedding(path: &Path, embedding: &EmbeddingMatrix, format: FileFormat) -> Result<()> {
    match format {
        FileFormat::Csv => save_csv(path, embedding),
        FileFormat::Binary => save_binary(path, embedding),
    }
}

fn load_csv(path: &Path) -> Result<EmbeddingMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    let mut first_content_line = true;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row_no = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if std::mem::take(&mut first_content_line)
            && fields.iter().all(|f| f64::from_str(f).is_err())
        {
            continue; // header line
        }
        match width {
            None => width = Some(fields.len()),
            Some(expected) if expected != fields.len() => {
                return Err(Error::Shape {
                    path: path.into(),
                    row: row_no,
                    expected,
                    got: fields.len(),
                })
            }
            Some(_) => {}
        }
        let mut row = Vec::with_capacity(fields.len());
        for (col_idx, field) in fields.iter().enumerate() {
            let value = f64::from_str(field).map_err(|e| Error::Parse {
                path: path.into(),
                row: row_no,
                col: col_idx + 1,
                msg: format!("{field:?}: {e}"),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    path: path.into(),
                    row: row_no,
                    col: col_idx + 1,
                });
            }
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.into(),
            row: 0,
            col: 0,
            msg: "file contains no data rows".to_owned(),
        });
    }
    EmbeddingMatrix::from_rows(&rows)
}

fn save_csv(path: &Path, embedding: &EmbeddingMatrix) -> Result<()> {
    let mut out = String::new();
    for row in embedding.rows() {
        for (j, value) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{value:.16e}"));
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

fn load_binary(path: &Path) -> Result<EmbeddingMatrix> {
    let whole_file = |msg: String| Error::Parse {
        path: path.into(),
        row: 0,
        col: 0,
        msg,
    };
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < HEADER_LEN {
        return Err(whole_file(format!(
            "{} bytes is too short for the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..8] != MAGIC {
        return Err(whole_file("bad magic; expected EMBMAT01".to_owned()));
    }
    let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let d = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    if n == 0 || d == 0 {
        return Err(whole_file(format!("header declares a {n}x{d} matrix")));
    }
    let expected = HEADER_LEN as u128 + 8 * n as u128 * d as u128;
    if bytes.len() as u128 != expected {
        return Err(whole_file(format!(
            "expected {expected} bytes for a {n}x{d} matrix, got {}",
            bytes.len()
        )));
    }
    let mut values = Vec::with_capacity(n * d);
    for (i, chunk) in bytes[HEADER_LEN..].chunks_exact(8).enumerate() {
        let value = f64::from_le_bytes(chunk.try_into().unwrap());
        if !value.is_finite() {
            return Err(Error::NonFiniteValue {
                path: path.into(),
                row: i / d + 1,
                col: i % d + 1,
            });
        }
        values.push(value);
    }
    EmbeddingMatrix::new(n, d, values)
}

fn save_binary(path: &Path, embedding: &EmbeddingMatrix) -> Result<()> {
    let (n, d) = (embedding.n(), embedding.d());
    if n > u32::MAX as usize || d > u32::MAX as usize {
        return Err(Error::BadParams(format!(
            "{n}x{d} matrix exceeds the binary format's u32 dimensions"
        )));
    }
    let mut bytes = Vec::with_capacity(HEADER_LEN + 8 * n * d);
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    bytes.extend_from_slice(&(d as u32).to_le_bytes());
    for value in embedding.values() {
        bytes.extend_from_slice(&value.to_le_bytes());
    }
    atomic_write(path, &bytes)
}
