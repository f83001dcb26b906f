//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by case validation, solving and planning.
#[derive(Debug, Error)]
pub enum Error {
    /// A case field has the wrong shape.
    #[error("dimension mismatch at {field}: expected {expected}, got {got}")]
    DimensionMismatch {
        field: String,
        expected: String,
        got: String,
    },

    /// A case value is out of its admissible range.
    #[error("invalid value at {field}: {message}")]
    InvalidValue { field: String, message: String },

    /// No square invertible basis could be assembled from the binding rows.
    #[error("basis construction failed: {0}")]
    BasisConstruction(String),

    /// A singular basis was passed where an invertible one is required.
    #[error("singular active-set basis")]
    SingularBasis,

    /// Attempt to branch on a variable that is already fixed.
    #[error("variable {0} is already fixed")]
    AlreadyFixed(usize),

    /// Rounded commitment schedule admits no feasible startup vector.
    #[error("startup repair infeasible for generator {generator} at period {period}")]
    RepairInfeasible { generator: usize, period: usize },

    /// A query point lies in parameter space where the problem is infeasible.
    #[error("point {0:?} lies in infeasible parameter space")]
    InfeasiblePoint(Vec<f64>),

    /// A region or polyhedron required to be nonempty is empty.
    #[error("empty region: {0}")]
    EmptyRegion(String),

    /// The enumeration guard of the brute-force oracle.
    #[error("{count} binary variables exceed the enumeration guard of {limit}; \
             use the branch-and-bound solver instead")]
    TooManyBinaries { count: usize, limit: usize },

    /// Budget polytope misses every incumbent piece.
    #[error("no incumbent piece intersects the budget polytope")]
    BudgetInfeasible,

    /// Malformed case or report file.
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    /// I/O failure while reading or writing files.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON input.
    #[error("json parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
