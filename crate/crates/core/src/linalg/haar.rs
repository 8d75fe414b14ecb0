//! Haar-distributed orthogonal matrices.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::tol::ORTHONORMALITY_TOL;

use super::matrix::Matrix;
use super::qr::qr_positive;

/// Draw an `n x n` orthogonal matrix from Haar measure on `O(n)`.
///
/// Fills a matrix with iid standard Gaussians and takes the `Q` of the
/// positive-diagonal QR factorization.  The sign normalization is what makes
/// the output exactly Haar rather than biased by the factorization
/// convention.  A singular Gaussian draw has probability zero; if round-off
/// produces one anyway we simply redraw.
pub fn haar_orthogonal(n: usize, rng: &mut impl Rng) -> Matrix {
    assert!(n >= 1, "haar_orthogonal needs n >= 1");
    loop {
        let g = Matrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        if let Ok((q, _)) = qr_positive(&g) {
            debug_assert!(
                q.gram().sub(&Matrix::identity(n)).max_abs() <= ORTHONORMALITY_TOL,
                "haar draw lost orthonormality"
            );
            return q;
        }
    }
}
