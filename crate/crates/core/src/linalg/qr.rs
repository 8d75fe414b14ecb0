//! Householder QR with a positive-diagonal normalization.
//!
//! Pinning `diag(R) > 0` makes the factorization of a full-column-rank matrix
//! unique, which the product cocycle relies on: the per-step growth factors
//! `log R[i][i]` are then well-defined functions of the input, and pushing a
//! Gaussian square matrix through this factorization yields Haar measure on
//! the orthogonal group without sign bias.

use crate::error::{Error, Result};
use crate::tol::PIVOT_FLOOR;

use super::matrix::Matrix;

/// Thin QR of an `n x k` matrix (`n >= k`): `Q` is `n x k` with orthonormal
/// columns, `R` is `k x k` upper triangular with strictly positive diagonal,
/// and `M = Q R`.  Fails with `DegenerateMatrix` when a diagonal entry of `R`
/// falls below the pivot floor (rank collapse).
pub fn qr_positive(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let (q_full, r_full) = qr_full(m)?;
    let k = m.cols();
    let q = q_full.columns(0..k);
    let r = Matrix::from_fn(k, k, |i, j| r_full[(i, j)]);
    Ok((q, r))
}

/// Full QR of an `n x k` matrix (`n >= k`): `Q` is `n x n` orthogonal, `R` is
/// `n x k` upper triangular with strictly positive diagonal on its first `k`
/// rows, and `M = Q R`.  Columns `k..n` of `Q` form an orthonormal basis of
/// the orthogonal complement of the column span of `M`.
pub fn qr_full(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = m.rows();
    let k = m.cols();
    if n < k {
        return Err(Error::Shape {
            op: "qr_full",
            details: format!("{n}x{k} has more columns than rows"),
        });
    }

    let mut r = m.clone();
    // Householder vectors; `None` marks an identity reflector.
    let mut vs: Vec<Option<Vec<f64>>> = Vec::with_capacity(k);

    for j in 0..k {
        let x: Vec<f64> = (j..n).map(|i| r[(i, j)]).collect();
        let norm = l2_norm(&x);
        if norm == 0.0 {
            vs.push(None);
            continue;
        }
        // alpha keeps the subtraction x - alpha*e1 cancellation-free.
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let vnorm = l2_norm(&v);
        if vnorm == 0.0 {
            vs.push(None);
            continue;
        }
        for t in v.iter_mut() {
            *t /= vnorm;
        }
        // Apply H = I - 2vv^T to the trailing block of R.
        for c in j..k {
            let mut w = 0.0;
            for (t, vi) in v.iter().enumerate() {
                w += vi * r[(j + t, c)];
            }
            for (t, vi) in v.iter().enumerate() {
                r[(j + t, c)] -= 2.0 * w * vi;
            }
        }
        // The pivot column is now alpha*e1 exactly, by construction.
        r[(j, j)] = alpha;
        for i in j + 1..n {
            r[(i, j)] = 0.0;
        }
        vs.push(Some(v));
    }

    // Q = H_0 H_1 ... H_{k-1}, built by applying reflectors to the identity
    // in reverse order.
    let mut q = Matrix::identity(n);
    for j in (0..k).rev() {
        if let Some(v) = &vs[j] {
            for c in 0..n {
                let mut w = 0.0;
                for (t, vi) in v.iter().enumerate() {
                    w += vi * q[(j + t, c)];
                }
                for (t, vi) in v.iter().enumerate() {
                    q[(j + t, c)] -= 2.0 * w * vi;
                }
            }
        }
    }

    // Normalize to a strictly positive diagonal of R.
    for j in 0..k {
        let d = r[(j, j)];
        if !(d.abs() > PIVOT_FLOOR) {
            return Err(Error::DegenerateMatrix {
                op: "qr",
                details: format!("R[{j}][{j}] = {d:e} below pivot floor"),
            });
        }
        if d < 0.0 {
            for c in j..k {
                r[(j, c)] = -r[(j, c)];
            }
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }

    Ok((q, r))
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
