//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter failed a structural validation (sizes, ranges, ordering).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A coordinate left its admissible range `{0,…,limit-1}`.
    #[error("coordinate {value} out of range for part {part} (allowed 0..{limit})")]
    CoordOutOfRange {
        part: usize,
        value: usize,
        limit: usize,
    },

    /// Two objects that must share a shape (dimensions, part count, level)
    /// do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A precondition of a conversion was not met; the string names the
    /// failed condition.
    #[error("conversion precondition failed: {0}")]
    Precondition(String),

    /// The window condition fails for a k-subset, so the fractional
    /// construction is not guaranteed to be a transversal.
    #[error("window condition violated at subset {subset:?}: {detail}")]
    WindowCondition { subset: Vec<usize>, detail: String },

    /// An array failed the strength check.
    #[error("strength check failed: {0}")]
    Strength(String),

    /// A combination produced a multiplicity that is not a non-negative
    /// integer at the named profile vector.
    #[error("combined multiplicity at {vector:?} is {value}, not a non-negative integer")]
    BadMultiplicity { vector: Vec<usize>, value: String },

    /// An instance exceeded a documented scale guard.
    #[error("scale guard exceeded: {0}")]
    ScaleGuard(String),

    /// A search space is too large to enumerate; add a tighter cap.
    #[error("search space too large: {0}")]
    SearchSpace(String),
}
