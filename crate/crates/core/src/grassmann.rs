//! Subspaces of `R^n`: Haar sampling, restrictions of linear maps, chart
//! derivatives around invariant subspaces, and the bookkeeping of invariant
//! subspaces spanned by eigenvalue subsets.
//!
//! A `k`-plane is represented concretely by an orthonormal frame.  All
//! quantities computed here (restriction determinants, chart derivatives up
//! to similarity) depend only on the span, not the frame; unit tests pin that
//! down.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{complex_eigenvalues, haar_orthogonal, kron_operator, qr_full, Matrix};
use crate::tol::{INVARIANCE_REL_TOL, ORTHONORMALITY_TOL, PIVOT_FLOOR, SPECTRUM_COLLISION_REL_TOL};

/// Orthonormal frame spanning a proper nontrivial subspace: `n x k` with
/// orthonormal columns and `1 <= k <= n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceFrame {
    basis: Matrix,
}

impl SubspaceFrame {
    /// Validate orthonormality (within `1e-12` in max norm) and dimension
    /// bounds.
    pub fn new(basis: Matrix) -> Result<Self> {
        let n = basis.rows();
        let k = basis.cols();
        if k < 1 || k >= n {
            return Err(Error::Shape {
                op: "SubspaceFrame::new",
                details: format!("need 1 <= k <= n-1, got k = {k}, n = {n}"),
            });
        }
        let dev = basis.gram().sub(&Matrix::identity(k)).max_abs();
        if dev > ORTHONORMALITY_TOL {
            return Err(Error::Shape {
                op: "SubspaceFrame::new",
                details: format!("columns not orthonormal: deviation {dev:e}"),
            });
        }
        Ok(Self { basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Orthonormal basis of the orthogonal complement, via full QR of the
    /// frame.  Any such basis works for the adapted-block constructions; this
    /// one is deterministic.
    pub fn complement(&self) -> Matrix {
        let (q, _) = qr_full(&self.basis).expect("orthonormal frame has full column rank");
        q.columns(self.dim()..self.ambient_dim())
    }
}

/// Haar-distributed `k`-plane in `R^n`: the span of the first `k` columns of
/// a Haar orthogonal matrix.
pub fn haar_subspace(n: usize, k: usize, rng: &mut impl Rng) -> SubspaceFrame {
    assert!(k >= 1 && k < n, "haar_subspace needs 1 <= k <= n-1");
    let u = haar_orthogonal(n, rng);
    SubspaceFrame::new(u.columns(0..k)).expect("columns of an orthogonal matrix form a frame")
}

/// `log |det(A restricted to g)|`: log-volume distortion of `A` from the
/// plane `g` to its image, i.e. `(1/2) log det(F^T A^T A F)` for any
/// orthonormal frame `F` of `g`.  `DegenerateMatrix` when `A` collapses `g`.
pub fn restriction_log_det(a: &Matrix, g: &SubspaceFrame) -> Result<f64> {
    assert_eq!(a.rows(), g.ambient_dim(), "ambient dimensions must agree");
    assert!(a.is_square());
    let af = a.mul(g.basis());
    let l = af.gram().cholesky().map_err(|_| Error::DegenerateMatrix {
        op: "restriction_log_det",
        details: "restricted map is rank deficient".into(),
    })?;
    // det(F^T A^T A F) = prod L[i][i]^2, so the half-log is the plain sum.
    Ok((0..l.rows()).map(|i| l[(i, i)].ln()).sum())
}

/// Derivative of the graph-chart action induced by `B` at an invariant
/// subspace `g`, as a matrix on `Hom(g, g_perp)` in the adapted basis
/// `(frame, complement)`: the map `X -> B2 X B1^{-1}` with `B1 = B` on `g`
/// and `B2 = B` on `g_perp`.
///
/// Preconditions checked: the off-block residual `C^T B F` must vanish to
/// `1e-8 * ||B||_max` (else `NotInvariant`), and `B1` must be invertible
/// (else `DegenerateMatrix`).
pub fn induced_chart_derivative(b: &Matrix, g: &SubspaceFrame) -> Result<Matrix> {
    assert_eq!(b.rows(), g.ambient_dim(), "ambient dimensions must agree");
    assert!(b.is_square());
    let f = g.basis();
    let c = g.complement();
    let bf = b.mul(f);
    let off = c.transpose().mul(&bf);
    let residual = off.max_abs();
    let tol = INVARIANCE_REL_TOL * b.max_abs();
    if residual > tol {
        return Err(Error::NotInvariant { residual, tol });
    }
    let b1 = f.transpose().mul(&bf);
    let b2 = c.transpose().mul(&b.mul(&c));
    kron_operator(&b2, &b1)
}

/// Normal Jacobian factor `det(Id - B2 (x) (B1^{-1})^T)` of the projection
/// that forgets the subspace coordinate, at a point with diagonal blocks
/// `B1` (on the plane) and `B2` (on its complement).  Signed.
pub fn normal_jacobian_pi1(b1: &Matrix, b2: &Matrix) -> Result<f64> {
    let k = kron_operator(b2, b1)?;
    let d = k.rows();
    Ok(Matrix::identity(d).sub(&k).det())
}

/// Outcome of maximizing `sum log |eigenvalue|` over invariant
/// eigenvalue-subsets of a given size.
#[derive(Debug, Clone, PartialEq)]
pub struct TopSumResult {
    /// Best subset log-sum; `0.0` when no subset of the requested size exists.
    pub value: f64,
    /// Whether any conjugation-closed subset of size `k` exists.
    pub attained: bool,
    /// Indices (into the eigenvalue list of `B`) of the chosen subset,
    /// sorted; empty when not attained.
    pub witness: Vec<usize>,
}

/// Real spectrum split into conjugation-closed units: real eigenvalues
/// (weight 1) and complex conjugate pairs (weight 2).
struct SpectrumUnits {
    /// `(eigenvalue index, log-modulus)` per real eigenvalue.
    reals: Vec<(usize, f64)>,
    /// `(index of +im member, index of -im member, log-modulus of each)`.
    pairs: Vec<(usize, usize, f64)>,
}

fn classify_spectrum(eigs: &[(f64, f64)]) -> Result<SpectrumUnits> {
    let moduli: Vec<f64> = eigs.iter().map(|&(re, im)| f64::hypot(re, im)).collect();
    let rho = moduli.iter().fold(0.0_f64, |m, &x| m.max(x));
    if !(rho > PIVOT_FLOOR) {
        return Err(Error::DegenerateMatrix {
            op: "classify_spectrum",
            details: "spectral radius vanishes".into(),
        });
    }
    // Subset selection is only well-defined on simple spectra: any collision
    // makes "which eigenvalue spans which subspace" ambiguous.
    let tol = SPECTRUM_COLLISION_REL_TOL * rho;
    let mut min_gap = f64::INFINITY;
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            let gap = f64::hypot(eigs[i].0 - eigs[j].0, eigs[i].1 - eigs[j].1);
            min_gap = min_gap.min(gap);
        }
    }
    if min_gap <= tol {
        return Err(Error::NonGenericSpectrum { gap: min_gap, tol });
    }
    if let Some(&m) = moduli.iter().find(|&&m| !(m > PIVOT_FLOOR)) {
        return Err(Error::DegenerateMatrix {
            op: "classify_spectrum",
            details: format!("eigenvalue modulus {m:e}"),
        });
    }

    let mut reals = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (idx, &(_, im)) in eigs.iter().enumerate() {
        if im == 0.0 {
            reals.push((idx, moduli[idx].ln()));
        } else if im > 0.0 {
            plus.push(idx);
        } else {
            minus.push(idx);
        }
    }
    assert_eq!(plus.len(), minus.len(), "real matrices have conjugate spectra");
    // Match each +im eigenvalue with its closest conjugate; the Schur form
    // produces exact conjugates so this pairing is unambiguous.
    let mut used = vec![false; minus.len()];
    let mut pairs = Vec::new();
    for &p in &plus {
        let target = (eigs[p].0, -eigs[p].1);
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (slot, &m) in minus.iter().enumerate() {
            if used[slot] {
                continue;
            }
            let d = f64::hypot(eigs[m].0 - target.0, eigs[m].1 - target.1);
            if d < best_d {
                best_d = d;
                best = Some(slot);
            }
        }
        let slot = best.expect("conjugate counts match");
        used[slot] = true;
        pairs.push((p, minus[slot], moduli[p].ln()));
    }
    Ok(SpectrumUnits { reals, pairs })
}

/// Maximize `sum of log |eigenvalue|` over conjugation-closed subsets of
/// exactly `k` eigenvalues of `B`; such subsets index the `B`-invariant
/// `k`-planes when the spectrum is simple.
///
/// Errors: `NonGenericSpectrum` on eigenvalue collision (relative gap below
/// `1e-8`), `DegenerateMatrix` on a vanishing eigenvalue.
pub fn invariant_topk_sum(b: &Matrix, k: usize) -> Result<TopSumResult> {
    assert!(b.is_square());
    let n = b.rows();
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    let eigs = complex_eigenvalues(b)?;
    let units = classify_spectrum(&eigs)?;

    // Exact-weight knapsack over units: reals weigh 1, pairs weigh 2.
    struct Item {
        weight: usize,
        value: f64,
        idxs: Vec<usize>,
        logs: Vec<f64>,
    }
    let mut items = Vec::new();
    for &(idx, lm) in &units.reals {
        items.push(Item { weight: 1, value: lm, idxs: vec![idx], logs: vec![lm] });
    }
    for &(ip, im_, lm) in &units.pairs {
        items.push(Item { weight: 2, value: 2.0 * lm, idxs: vec![ip, im_], logs: vec![lm, lm] });
    }

    let mut dp: Vec<Option<(f64, Vec<usize>)>> = vec![None; k + 1];
    dp[0] = Some((0.0, Vec::new()));
    for (item_no, item) in items.iter().enumerate() {
        for j in (item.weight..=k).rev() {
            if let Some((base, chosen)) = dp[j - item.weight].clone() {
                let cand = base + item.value;
                let better = match &dp[j] {
                    None => true,
                    Some((cur, _)) => cand > *cur,
                };
                if better {
                    let mut c = chosen;
                    c.push(item_no);
                    dp[j] = Some((cand, c));
                }
            }
        }
    }

    match dp[k].take() {
        None => Ok(TopSumResult { value: 0.0, attained: false, witness: Vec::new() }),
        Some((_, chosen)) => {
            let mut witness = Vec::new();
            let mut logs = Vec::new();
            for item_no in chosen {
                witness.extend_from_slice(&items[item_no].idxs);
                logs.extend_from_slice(&items[item_no].logs);
            }
            witness.sort_unstable();
            // Re-sum largest-first so the value is exactly comparable with
            // top-k partial sums computed the same way.
            logs.sort_by(|a, b| b.partial_cmp(a).expect("finite log-moduli"));
            let value = logs.iter().sum();
            Ok(TopSumResult { value, attained: true, witness })
        }
    }
}

/// Number of conjugation-closed eigenvalue subsets of size `k`, i.e. the
/// number of `B`-invariant `k`-planes for simple spectra:
/// `sum_p C(#pairs, p) * C(#reals, k - 2p)`.  Always at most `C(n, k)`.
pub fn count_invariant_subspaces(b: &Matrix, k: usize) -> Result<u64> {
    assert!(b.is_square());
    let n = b.rows();
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    let eigs = complex_eigenvalues(b)?;
    let units = classify_spectrum(&eigs)?;
    let r = units.reals.len() as u64;
    let c = units.pairs.len() as u64;
    let mut total: u128 = 0;
    for p in 0..=(k as u64 / 2).min(c) {
        let rest = k as u64 - 2 * p;
        if rest > r {
            continue;
        }
        total += binomial(c, p) * binomial(r, rest);
    }
    Ok(u64::try_from(total).expect("counts fit in u64 for supported sizes"))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
