use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input contains a non-finite value")]
    NonFiniteInput,

    #[error("row {row} has zero norm; cosine distance is undefined")]
    ZeroNormRow { row: usize },

    #[error("point cloud has {n} points but at least {needed} are required")]
    DegenerateCloud { n: usize, needed: usize },

    #[error("all points coincide; the diameter is zero")]
    ZeroDiameter,

    #[error("matrix has no nonzero singular values")]
    AllZeroMatrix,

    #[error("numerical rank {rank} is too low (need at least {needed})")]
    RankTooLow { rank: usize, needed: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { got: usize, needed: usize },

    #[error("all values are tied; ranks carry no information")]
    AllTied,

    #[error("column {name:?} is missing")]
    MissingColumn { name: String },

    #[error("point cloud has {n} points; the exhaustive reduction is capped at {max}")]
    TooLarge { n: usize, max: usize },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("{path}: parse error at row {row}, column {col}: {msg}")]
    Parse {
        path: PathBuf,
        row: usize,
        col: usize,
        msg: String,
    },

    #[error("{path}: row {row} has {got} fields, expected {expected}")]
    Shape {
        path: PathBuf,
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("{path}: non-finite value at row {row}, column {col}")]
    NonFiniteValue {
        path: PathBuf,
        row: usize,
        col: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether this error stems from bad input (files, arguments, config)
    /// rather than from a numeric failure during computation. The CLI maps
    /// input errors to exit code 1 and computation errors to exit code 2.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::BadParams(_)
                | Error::Parse { .. }
                | Error::Shape { .. }
                | Error::NonFiniteValue { .. }
                | Error::Config(_)
                | Error::Io { .. }
                | Error::MissingColumn { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
