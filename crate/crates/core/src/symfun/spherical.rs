//! Spherical functions for orthogonal-group averages of characters.
//!
//! Averaging the character of the irreducible representation indexed by `mu`
//! over a full rotation orbit kills every `mu` with an odd part; for even
//! `mu = 2 lambda` the average depends only on the singular value spectrum
//! and is the normalized Jack-2 polynomial
//!
//! ```text
//! phi_mu(M) = P_lambda^(2)(squared singular values) / P_lambda^(2)(1,...,1).
//! ```
//!
//! [`f_mu_mc`] estimates the same average directly by Monte Carlo over the
//! orthogonal group and exists solely to cross-check [`f_mu`]; the two paths
//! share no symmetric-function code.

use num::{BigRational, Signed};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{haar_orthogonal, symmetric_eigenvalues, Matrix};
use crate::rng::RngStream;
use crate::stats::McEstimate;

use super::jack::zonal_in_monomials;
use super::partition::Partition;
use super::schur::schur_character;

/// Normalized spherical value at a positive point interpreted as squared
/// singular values.
///
/// Errors: `OddPartition` when `mu` has an odd part, `InvalidPartition` when
/// `mu` needs more variables than points given, `InvalidPoint` for
/// non-positive coordinates.
pub fn spherical_phi(mu: &Partition, squared_svals: &[f64]) -> Result<f64> {
    let lambda = mu
        .halved()
        .ok_or_else(|| Error::OddPartition(format!("[{mu}]")))?;
    let n = squared_svals.len();
    if lambda.len() > n {
        return Err(Error::InvalidPartition(format!(
            "partition [{mu}] needs more than {n} variables"
        )));
    }
    if squared_svals.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidPoint("squared singular values must be positive".into()));
    }
    let p = zonal_in_monomials(&lambda, n)?;
    let denom = p.eval_at_ones().to_f64().expect("principal value fits f64");
    Ok(p.eval_f64(squared_svals) / denom)
}

/// Exact-rational variant of [`spherical_phi`].
pub fn spherical_phi_rational(
    mu: &Partition,
    squared_svals: &[BigRational],
) -> Result<BigRational> {
    let lambda = mu
        .halved()
        .ok_or_else(|| Error::OddPartition(format!("[{mu}]")))?;
    let n = squared_svals.len();
    if lambda.len() > n {
        return Err(Error::InvalidPartition(format!(
            "partition [{mu}] needs more than {n} variables"
        )));
    }
    if squared_svals.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidPoint("squared singular values must be positive".into()));
    }
    let p = zonal_in_monomials(&lambda, n)?;
    Ok(p.eval_rational(squared_svals) / p.eval_at_ones())
}

/// Rotation-orbit average of the `mu`-character at an invertible matrix `M`:
/// `0` for `mu` with an odd part, otherwise [`spherical_phi`] at the squared
/// singular values of `M`.
pub fn f_mu(mu: &Partition, m: &Matrix) -> Result<f64> {
    assert!(m.is_square());
    if !mu.is_even() {
        return Ok(0.0);
    }
    let sq = symmetric_eigenvalues(&m.gram());
    if sq.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::DegenerateMatrix {
            op: "f_mu",
            details: "matrix is singular within round-off".into(),
        });
    }
    spherical_phi(mu, &sq)
}

/// Monte Carlo oracle for [`f_mu`]: average of the `mu`-character of
/// `psi * M` over Haar rotations `psi`.  Uses the trace-based character
/// pipeline, fully independent of the Jack expansion.
pub fn f_mu_mc(
    mu: &Partition,
    m: &Matrix,
    nsamples: u64,
    stream: RngStream,
    workers: usize,
) -> Result<McEstimate> {
    assert!(m.is_square());
    let n = m.rows();
    if mu.len() > n {
        return Err(Error::InvalidPartition(format!(
            "partition [{mu}] needs more than {n} variables"
        )));
    }
    crate::lyapunov::parallel_mean(nsamples, stream, workers, move |rng| {
        let psi = haar_orthogonal(n, rng);
        Ok(schur_character(mu, &psi.mul(m)))
    })
}
