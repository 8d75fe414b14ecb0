//! Dense linear algebra kernels shared by all estimators.

mod eig;
mod haar;
mod kron;
mod matrix;
mod qr;

pub use eig::{char_poly, complex_eigenvalues, eig_log_moduli, symmetric_eigenvalues, EigenLogModuli};
pub use haar::haar_orthogonal;
pub use kron::kron_operator;
pub use matrix::Matrix;
pub use qr::{qr_full, qr_positive};
