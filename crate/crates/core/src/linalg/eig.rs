//! Eigenvalue utilities: complex spectra via the real Schur form, log-moduli
//! bookkeeping, and characteristic polynomials.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tol::PIVOT_FLOOR;

use super::matrix::Matrix;

/// Iteration cap for the Schur reduction; far above what any conditioned
/// input needs, but keeps pathological input from spinning forever.
const SCHUR_MAX_ITERS: usize = 100_000;

/// The QR iteration occasionally stalls on well-conditioned inputs whose
/// shift pattern cycles.  Conjugating by a fixed orthogonal matrix keeps the
/// spectrum and breaks the cycle; a handful of attempts has always sufficed.
const SCHUR_RESTARTS: u64 = 4;

/// Sorted log-moduli of the eigenvalues of a real invertible matrix.
///
/// Values are non-increasing, and their total equals `log |det|` up to
/// round-off.  Partial sums are taken left to right, i.e. largest terms
/// first; keeping that order fixed is what makes cross-checks between
/// different estimators of the same quantity exactly reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenLogModuli {
    values: Vec<f64>,
}

impl EigenLogModuli {
    pub(crate) fn from_sorted(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of the `k` largest log-moduli, accumulated in decreasing order.
    pub fn sum_top(&self, k: usize) -> f64 {
        assert!(k <= self.values.len());
        self.values[..k].iter().sum()
    }

    /// Sum of all log-moduli (equals `log |det|` up to round-off).
    pub fn sum(&self) -> f64 {
        self.sum_top(self.values.len())
    }
}

/// Complex eigenvalues of a real square matrix as `(re, im)` pairs, computed
/// from the real Schur form.  Order follows the Schur blocks; complex values
/// appear in exact conjugate pairs.  Fully deterministic, including the
/// restart path for inputs that stall the plain iteration.
pub fn complex_eigenvalues(a: &Matrix) -> Result<Vec<(f64, f64)>> {
    assert!(a.is_square(), "eigenvalues need a square matrix");
    let n = a.rows();
    let try_schur = |m: &Matrix| -> Option<Vec<(f64, f64)>> {
        let na = DMatrix::from_row_slice(n, n, m.data());
        nalgebra::Schur::try_new(na, f64::EPSILON, SCHUR_MAX_ITERS)
            .map(|s| s.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect())
    };
    if let Some(eigs) = try_schur(a) {
        return Ok(eigs);
    }
    for restart in 0..SCHUR_RESTARTS {
        let mut rng = crate::rng::RngStream::new(0x5C09_11AB, restart).rng();
        let q = super::haar::haar_orthogonal(n, &mut rng);
        if let Some(eigs) = try_schur(&q.transpose().mul(a).mul(&q)) {
            return Ok(eigs);
        }
    }
    Err(Error::NoConvergence { op: "schur", iters: SCHUR_MAX_ITERS })
}

/// Log-moduli of the eigenvalues of an invertible matrix, sorted
/// non-increasing.  A zero (or numerically vanished) eigenvalue reports
/// `DegenerateMatrix`.
pub fn eig_log_moduli(a: &Matrix) -> Result<EigenLogModuli> {
    let eigs = complex_eigenvalues(a)?;
    let mut logs = Vec::with_capacity(eigs.len());
    for (re, im) in eigs {
        let modulus = f64::hypot(re, im);
        if !(modulus > PIVOT_FLOOR) || !modulus.is_finite() {
            return Err(Error::DegenerateMatrix {
                op: "eig_log_moduli",
                details: format!("eigenvalue modulus {modulus:e}"),
            });
        }
        logs.push(modulus.ln());
    }
    logs.sort_by(|a, b| b.partial_cmp(a).expect("log-moduli are finite"));
    Ok(EigenLogModuli::from_sorted(logs))
}

/// Eigenvalues of a symmetric matrix, sorted non-increasing.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    // Symmetrize to scrub round-off asymmetry before handing off.
    let sym = a.add(&a.transpose()).scale(0.5);
    let na = DMatrix::from_row_slice(n, n, sym.data());
    let mut vals: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("symmetric eigenvalues are real"));
    vals
}

/// Monic characteristic polynomial `det(x Id - A)` by the Faddeev-LeVerrier
/// recurrence.  Returns coefficients `[c_0, ..., c_{n-1}, 1]` with
/// `p(x) = sum c_k x^k`.  Exact-rational in spirit but computed in floats;
/// accurate for the small, moderately scaled matrices it is used on.
pub fn char_poly(a: &Matrix) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = Matrix::identity(n);
    for k in 1..=n {
        let am = a.mul(&m);
        c[n - k] = -am.trace() / k as f64;
        m = am.add(&Matrix::identity(n).scale(c[n - k]));
    }
    c
}
