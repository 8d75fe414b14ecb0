//! The conjugation operator `X -> B2 X B1^{-1}` as an explicit matrix.

use crate::error::Result;

use super::matrix::Matrix;

/// Matrix of the linear map `X -> B2 X B1^{-1}` on `(n-k) x k` matrices `X`,
/// in the row-major entry basis (`X[p][q]` maps to flat index `p*k + q`).
///
/// Equals the Kronecker product `B2 (x) (B1^{-1})^T`.  Its eigenvalues are
/// exactly the ratios `beta_i / alpha_j` over eigenvalues `beta_i` of `B2`
/// and `alpha_j` of `B1`.  Fails with `DegenerateMatrix` when `B1` is
/// singular.
pub fn kron_operator(b2: &Matrix, b1: &Matrix) -> Result<Matrix> {
    assert!(b1.is_square() && b2.is_square(), "kron_operator needs square blocks");
    let k = b1.rows();
    let nk = b2.rows();
    let b1_inv = b1.inverse()?;
    let d = nk * k;
    let mut out = Matrix::zeros(d, d);
    for p in 0..nk {
        for q in 0..k {
            let row = p * k + q;
            for r in 0..nk {
                let factor = b2[(p, r)];
                if factor == 0.0 {
                    continue;
                }
                for s in 0..k {
                    out[(row, r * k + s)] = factor * b1_inv[(s, q)];
                }
            }
        }
    }
    Ok(out)
}
