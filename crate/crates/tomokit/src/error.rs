use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// Variants are grouped by how a caller should react: `Spec` means the
/// request itself was malformed (bad state description, incompatible
/// arguments), while `Grid`, `Distribution` and `Numeric` mean a numeric
/// guard tripped on otherwise well-formed input.
#[derive(Debug, Error)]
pub enum TomoError {
    /// Malformed state specification or incompatible request.
    #[error("state spec: {0}")]
    Spec(String),

    /// Grid construction or grid compatibility failure.
    #[error("grid: {0}")]
    Grid(String),

    /// A probability object failed validation (negativity, bad normalization,
    /// zero-mass column).
    #[error("distribution: {0}")]
    Distribution(String),

    /// A numeric guard tripped: unresolved quadrature, unnormalized slice,
    /// tail leakage past the grid edge, parameter out of the supported range.
    #[error("numeric guard: {0}")]
    Numeric(String),

    /// Malformed CSV payload (missing columns, non-numeric cells, ragged
    /// angle blocks).
    #[error("csv: {0}")]
    Csv(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, TomoError>;
