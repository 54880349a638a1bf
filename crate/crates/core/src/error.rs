use thiserror::Error;

/// Errors shared across the crate.
///
/// Construction preconditions (nonzero pivot entries, nonsingular minors,
/// certification hypotheses) are reported through [`Error::Precondition`]
/// with a message naming the failed hypothesis, so callers can surface the
/// reason a construction does not apply rather than a bare failure.
#[derive(Debug, Error)]
pub enum Error {
    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An operation that requires a square matrix received a rectangular one.
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A row or column index lies outside the matrix.
    #[error("index {index} out of range (order {order})")]
    IndexOutOfRange { index: usize, order: usize },

    /// A variable placement is malformed: duplicate position, position out of
    /// range, or a position where the matrix entry is zero.
    #[error("invalid placement at ({row}, {col}): {reason}")]
    InvalidPlacement {
        row: usize,
        col: usize,
        reason: String,
    },

    /// A certification hypothesis or construction precondition failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An entry of a bordered matrix's new last row vanished where the source
    /// row is nonzero, so the sign pattern of the result would silently lose
    /// a nonzero position.
    #[error("cancellation in bordered row at columns {0:?}")]
    Cancellation(Vec<usize>),

    /// The request exceeds a documented capability bound (for example, the
    /// equivalence search order limit).
    #[error("capability exceeded: {0}")]
    CapabilityExceeded(String),

    /// The iterative solver stopped without reaching the requested residual.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    Nonconvergence { iterations: usize, residual: f64 },

    /// Backtracking could not keep every variable strictly inside its sign
    /// orthant.
    #[error("sign orthant violated: {0}")]
    OrthantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
