//! Numerical kernels for comparing growth statistics of random matrix
//! products with averages over the orthogonal group.
//!
//! The crate has three layers:
//!
//! * [`linalg`], [`rng`], [`stats`]: deterministic dense linear algebra
//!   (QR with positive diagonal, Schur-based spectra, Haar sampling) and
//!   seedable Monte Carlo plumbing.
//! * [`grassmann`], [`lyapunov`], [`verify`]: subspace restrictions, the QR
//!   product cocycle, and the estimator cross-checks built from them.
//! * [`symfun`], [`jchar`]: exact symmetric-function machinery (Jack
//!   polynomials at parameter 2, orthogonal spherical functions, Schur
//!   characters) and the determinant character series evaluated both exactly
//!   and by Monte Carlo.
//!
//! Shared types are re-exported at the crate root.

pub mod error;
pub mod grassmann;
pub mod jchar;
pub mod linalg;
pub mod lyapunov;
pub mod rng;
pub mod stats;
pub mod symfun;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{EigenLogModuli, Matrix};
pub use rng::RngStream;
pub use stats::McEstimate;
