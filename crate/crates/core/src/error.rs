use thiserror::Error;

/// Errors produced by the geometry, operator, reconstruction, simulation and
/// metric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("rho {rho} outside hough range [{min}, {max}]")]
    RhoOutOfRange { rho: f64, min: f64, max: f64 },
    #[error("empty mask, no seed available")]
    EmptyMask,
    #[error("undefined distance for empty mask")]
    EmptyMaskDistance,
    #[error("degenerate barrier, no fillable region")]
    DegenerateBarrier,
    #[error("line outside image")]
    LineOutsideImage,
    #[error("unsatisfiable polygon constraints")]
    UnsatisfiablePolygon,
    #[error("negative value {value} at index {index}")]
    NegativeValue { index: usize, value: f64 },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
