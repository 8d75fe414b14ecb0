use thiserror::Error;

/// Errors surfaced by the numerical kernels.
///
/// `Shape` and `NonFinite` indicate caller bugs (bad input geometry).  The
/// remaining variants are data-dependent: they report that a computation hit a
/// degeneracy that the algorithms deliberately refuse to push through.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Matrix dimensions do not fit the requested operation.
    #[error("shape mismatch in {op}: {details}")]
    Shape { op: &'static str, details: String },

    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Rank collapse: a pivot or singular value fell below the hard floor.
    #[error("degenerate matrix in {op}: {details}")]
    DegenerateMatrix { op: &'static str, details: String },

    /// The subspace handed to a chart construction is not invariant under the
    /// given operator.
    #[error("subspace is not invariant: residual {residual:.3e} exceeds {tol:.3e}")]
    NotInvariant { residual: f64, tol: f64 },

    /// Two eigenvalues coincide within tolerance, so eigenvalue-subset
    /// bookkeeping is ill-defined.
    #[error("non-generic spectrum: eigenvalue gap {gap:.3e} below {tol:.3e}")]
    NonGenericSpectrum { gap: f64, tol: f64 },

    /// A partition argument is malformed or out of range for the request.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// A spherical-function evaluation was requested for a partition with an
    /// odd part; only even partitions index nonzero averages.
    #[error("partition has an odd part: {0}")]
    OddPartition(String),

    /// An evaluation point violates a positivity requirement.
    #[error("invalid evaluation point: {0}")]
    InvalidPoint(String),

    /// An iterative routine failed to converge.
    #[error("no convergence in {op} after {iters} iterations")]
    NoConvergence { op: &'static str, iters: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
