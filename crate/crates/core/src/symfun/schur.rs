//! Schur characters of matrices: irreducible polynomial characters of the
//! general linear group, evaluated from traces of matrix powers.
//!
//! Pipeline: power sums `p_j = tr(X^j)`, Newton's identities to complete
//! homogeneous sums `h_j`, then the Jacobi-Trudi determinant
//! `s_mu = det[h_{mu_i - i + j}]`.  The whole pipeline is generic over the
//! scalar so the same code drives floats and exact rationals.

use num::traits::NumAssign;
use num::Signed;

use crate::linalg::Matrix;

use super::partition::Partition;

/// Character of the irreducible polynomial representation indexed by `mu`,
/// evaluated at a real square matrix: the Schur polynomial of its (possibly
/// complex) eigenvalues, always real, computed from traces of powers.
///
/// Vanishes identically when `mu` has more parts than the matrix dimension.
pub fn schur_character(mu: &Partition, x: &Matrix) -> f64 {
    assert!(x.is_square());
    let max_p = max_power_needed(mu);
    let mut p = Vec::with_capacity(max_p + 1);
    p.push(x.rows() as f64); // p_0 = tr(Id) = n
    let mut acc = x.clone();
    for j in 1..=max_p {
        if j > 1 {
            acc = acc.mul(x);
        }
        p.push(acc.trace());
    }
    schur_from_power_sums(mu, &p)
}

/// Schur polynomial value from power sums `p[0..=max]` with `p[0] = n` (the
/// number of variables).  Generic over exact and floating scalars.
pub fn schur_from_power_sums<T>(mu: &Partition, p: &[T]) -> T
where
    T: Clone + NumAssign + Signed + PartialOrd,
{
    let h = complete_homogeneous_from_power_sums(p);
    jacobi_trudi(mu, &h)
}

/// Newton's identities: `m h_m = sum_{i=1..m} p_i h_{m-i}`.
pub fn complete_homogeneous_from_power_sums<T>(p: &[T]) -> Vec<T>
where
    T: Clone + NumAssign + Signed + PartialOrd,
{
    let max = p.len() - 1;
    let mut h: Vec<T> = Vec::with_capacity(max + 1);
    h.push(T::one());
    for m in 1..=max {
        let mut s = T::zero();
        for i in 1..=m {
            s += p[i].clone() * h[m - i].clone();
        }
        h.push(s / from_usize::<T>(m));
    }
    h
}

/// Jacobi-Trudi determinant `det[h_{mu_i - i + j}]` over the first `l(mu)`
/// rows; `h` must cover indices up to `mu_1 + l(mu) - 1`.
pub fn jacobi_trudi<T>(mu: &Partition, h: &[T]) -> T
where
    T: Clone + NumAssign + Signed + PartialOrd,
{
    let l = mu.len();
    if l == 0 {
        return T::one();
    }
    let parts = mu.parts();
    let mut m: Vec<Vec<T>> = Vec::with_capacity(l);
    for i in 0..l {
        let mut row = Vec::with_capacity(l);
        for j in 0..l {
            // Index mu_i - i + j in one-based terms.
            let idx = parts[i] as i64 - i as i64 + j as i64;
            row.push(if idx < 0 { T::zero() } else { h[idx as usize].clone() });
        }
        m.push(row);
    }
    determinant(m)
}

/// Determinant by Gaussian elimination with partial pivoting on magnitude.
/// Exact for exact scalars; the pivoting only reorders rows.
fn determinant<T>(mut m: Vec<Vec<T>>) -> T
where
    T: Clone + NumAssign + Signed + PartialOrd,
{
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| {
                m[a][col].abs().partial_cmp(&m[b][col].abs()).expect("comparable scalars")
            })
            .expect("non-empty range");
        if m[pivot_row][col].is_zero() {
            return T::zero();
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= pivot.clone();
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone() / pivot.clone();
            for j in col..n {
                let sub = factor.clone() * m[col][j].clone();
                m[row][j] -= sub;
            }
        }
    }
    det
}

fn from_usize<T: Clone + NumAssign>(k: usize) -> T {
    let mut acc = T::zero();
    for _ in 0..k {
        acc += T::one();
    }
    acc
}

fn max_power_needed(mu: &Partition) -> usize {
    if mu.is_empty() {
        0
    } else {
        (mu.parts()[0] as usize + mu.len()).saturating_sub(1)
    }
}
