use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by state construction, the numerical operations and the report layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid [{lower}, {upper}] cannot hold the state extent [{need_lower}, {need_upper}]")]
    Truncated {
        lower: f64,
        upper: f64,
        need_lower: f64,
        need_upper: f64,
    },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("distribution is not normalized (integral {0})")]
    NotNormalized(f64),

    #[error("negative probability {0}")]
    NegativeProbability(f64),

    #[error("value {value} does not lie on the grid")]
    OffGrid { value: f64 },

    #[error("conditioning slice has zero probability (norm {0:e})")]
    ZeroProbability(f64),

    #[error("phase grid of {n_phi} points aliases a number state needing at least {required}")]
    Aliasing { n_phi: usize, required: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("density operator has negative eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("observable has a degenerate spectrum (gap {0:e})")]
    DegenerateSpectrum(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("singular information matrix (inverse conditioning {0:e})")]
    Singular(f64),

    #[error("degenerate marginal: {0}")]
    Degenerate(String),

    #[error("numerical instability: {0}")]
    Unstable(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
