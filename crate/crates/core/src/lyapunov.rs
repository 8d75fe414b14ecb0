//! Random matrix product models and growth-rate estimators.
//!
//! Three estimators probe the same circle of quantities from different
//! directions and are kept strictly separate so they can cross-check each
//! other:
//!
//! * [`lyapunov_spectrum_qr`]: time averages of QR growth factors along one
//!   long product trajectory.
//! * [`topk_sum_grassmann`]: space average of `log |det A|_g|` over
//!   independent samples `A` and Haar planes `g`; its mean equals the sum of
//!   the top `k` exponents of the product.
//! * [`mean_exponent_lhs`] / [`sup_invariant_lhs`]: per-sample spectral
//!   functionals of a single factor (top-`k` eigenvalue log-sum, best
//!   invariant-subspace log-volume), clipped at zero.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grassmann::{haar_subspace, invariant_topk_sum, restriction_log_det};
use crate::linalg::{eig_log_moduli, haar_orthogonal, Matrix};
use crate::rng::RngStream;
use crate::stats::{batch_means_stderr, McEstimate, RunningStat};
use crate::tol::REJECTION_FLAG_RATE;

/// Number of non-overlapping batches used for cocycle error bars.
const COCYCLE_BATCHES: usize = 20;

/// Distribution of a single random factor.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureModel {
    /// Deterministic factor: every sample is the same invertible matrix.
    PointMass(Matrix),
    /// `U A0` with `U` Haar on `O(n)`: the left rotation orbit of `A0`.
    LeftHaarOrbit(Matrix),
    /// `U D V` with `U, V` independent Haar and `D` a fixed positive
    /// diagonal: the bi-invariant orbit with prescribed singular values.
    TwoSidedHaarOrbit(Matrix),
}

impl MeasureModel {
    /// Point mass at an invertible square matrix.
    pub fn point_mass(a: Matrix) -> Result<Self> {
        Self::check_invertible(&a)?;
        Ok(Self::PointMass(a))
    }

    /// Left rotation orbit of an invertible square matrix.
    pub fn left_haar_orbit(a0: Matrix) -> Result<Self> {
        Self::check_invertible(&a0)?;
        Ok(Self::LeftHaarOrbit(a0))
    }

    /// Two-sided rotation orbit with the given positive singular values.
    pub fn two_sided_haar_orbit(svals: &[f64]) -> Result<Self> {
        if svals.is_empty() || svals.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::DegenerateMatrix {
                op: "two_sided_haar_orbit",
                details: "singular values must be finite and positive".into(),
            });
        }
        Ok(Self::TwoSidedHaarOrbit(Matrix::diagonal(svals)))
    }

    fn check_invertible(a: &Matrix) -> Result<()> {
        if !a.is_square() {
            return Err(Error::Shape {
                op: "MeasureModel",
                details: format!("{}x{} not square", a.rows(), a.cols()),
            });
        }
        a.inverse().map(|_| ()).map_err(|_| Error::DegenerateMatrix {
            op: "MeasureModel",
            details: "base matrix is singular".into(),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::PointMass(a) | Self::LeftHaarOrbit(a) | Self::TwoSidedHaarOrbit(a) => a.rows(),
        }
    }

    /// Draw one factor.
    pub fn sample(&self, rng: &mut impl Rng) -> Matrix {
        match self {
            Self::PointMass(a) => a.clone(),
            Self::LeftHaarOrbit(a0) => haar_orthogonal(a0.rows(), rng).mul(a0),
            Self::TwoSidedHaarOrbit(d) => {
                let n = d.rows();
                let u = haar_orthogonal(n, rng);
                let v = haar_orthogonal(n, rng);
                u.mul(d).mul(&v)
            }
        }
    }
}

/// Estimated Lyapunov spectrum of the random product, with batch-means error
/// bars per exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    /// Exponents in non-increasing order of QR position.
    pub exponents: Vec<f64>,
    /// Batch-means standard error per exponent (infinite below 2 batches).
    pub stderr: Vec<f64>,
    /// Number of cocycle steps.
    pub steps: usize,
}

impl LyapunovEstimate {
    /// Sum of the first `k` exponents, accumulated in the stored order.
    pub fn sum_top(&self, k: usize) -> f64 {
        assert!(k <= self.exponents.len());
        self.exponents[..k].iter().sum()
    }

    /// Standard error of `sum_top(k)` treating the per-position series as
    /// independent (conservative within a constant for QR cocycles).
    pub fn sum_top_stderr(&self, k: usize) -> f64 {
        self.stderr[..k].iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

/// Run the QR cocycle for `m` steps: repeatedly draw a factor, push the
/// current orthogonal frame through it, and re-orthonormalize with the
/// positive-diagonal QR.  The time average of `log R[i][i]` estimates the
/// `i`-th Lyapunov exponent.
pub fn lyapunov_spectrum_qr(
    model: &MeasureModel,
    m: usize,
    stream: RngStream,
) -> Result<LyapunovEstimate> {
    assert!(m >= 1, "need at least one step");
    let n = model.dim();
    let mut rng = stream.rng();
    let mut q = Matrix::identity(n);
    let mut logs: Vec<Vec<f64>> = vec![Vec::with_capacity(m); n];
    for _ in 0..m {
        let a = model.sample(&mut rng);
        let (qq, r) = crate::linalg::qr_positive(&a.mul(&q))?;
        q = qq;
        for (i, series) in logs.iter_mut().enumerate() {
            series.push(r[(i, i)].ln());
        }
    }
    let exponents: Vec<f64> =
        logs.iter().map(|s| s.iter().sum::<f64>() / m as f64).collect();
    let stderr: Vec<f64> =
        logs.iter().map(|s| batch_means_stderr(s, COCYCLE_BATCHES)).collect();
    Ok(LyapunovEstimate { exponents, stderr, steps: m })
}

/// Split `total` samples into `workers` near-equal chunks.
pub(crate) fn worker_counts(total: u64, workers: usize) -> Vec<u64> {
    assert!(workers >= 1);
    let w = workers as u64;
    (0..w).map(|i| total / w + u64::from(i < total % w)).collect()
}

/// Parallel mean of a per-sample statistic of `(rng)` draws.  Workers get
/// disjoint substreams `stream.substream(0..workers)` and are merged in
/// worker order, so results depend only on `(stream, workers, nsamples)`.
pub(crate) fn parallel_mean(
    nsamples: u64,
    stream: RngStream,
    workers: usize,
    sample_fn: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Result<f64> + Sync,
) -> Result<McEstimate> {
    let counts = worker_counts(nsamples, workers);
    let stats: Result<Vec<RunningStat>> = counts
        .par_iter()
        .enumerate()
        .map(|(w, &cnt)| {
            let mut rng = stream.substream(w as u64).rng();
            let mut stat = RunningStat::new();
            for _ in 0..cnt {
                stat.push(sample_fn(&mut rng)?);
            }
            Ok(stat)
        })
        .collect();
    let mut total = RunningStat::new();
    for s in stats? {
        total.merge(&s);
    }
    Ok(total.estimate())
}

/// Monte Carlo estimate of `E[log |det A|_g|]` over independent factors `A`
/// and Haar `k`-planes `g`.  Equals the sum of the top `k` Lyapunov
/// exponents for rotation-orbit models.
pub fn topk_sum_grassmann(
    model: &MeasureModel,
    k: usize,
    nsamples: u64,
    stream: RngStream,
    workers: usize,
) -> Result<McEstimate> {
    let n = model.dim();
    assert!(k >= 1 && k < n, "need 1 <= k <= n-1");
    parallel_mean(nsamples, stream, workers, |rng| {
        let a = model.sample(rng);
        let g = haar_subspace(n, k, rng);
        restriction_log_det(&a, &g)
    })
}

/// Monte Carlo estimate of `E[(sum of top-k eigenvalue log-moduli)^+]` of a
/// single factor.
pub fn mean_exponent_lhs(
    model: &MeasureModel,
    k: usize,
    nsamples: u64,
    stream: RngStream,
    workers: usize,
) -> Result<McEstimate> {
    let n = model.dim();
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    parallel_mean(nsamples, stream, workers, |rng| {
        let a = model.sample(rng);
        Ok(eig_log_moduli(&a)?.sum_top(k).max(0.0))
    })
}

/// Result of [`sup_invariant_lhs`]: the estimate plus degenerate-spectrum
/// rejection accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct SupInvariantEstimate {
    pub estimate: McEstimate,
    /// Samples rejected for eigenvalue collisions.
    pub rejected: u64,
    /// Total samples attempted (accepted + rejected).
    pub attempted: u64,
}

impl SupInvariantEstimate {
    pub fn rejection_rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.rejected as f64 / self.attempted as f64
        }
    }

    /// True when rejections exceed the trust threshold (0.1%).
    pub fn flagged(&self) -> bool {
        self.rejection_rate() > REJECTION_FLAG_RATE
    }
}

/// Monte Carlo estimate of `E[(best invariant k-subset log-sum)^+]` of a
/// single factor.  Samples whose spectrum has a collision are rejected and
/// counted; a sample with no invariant `k`-plane contributes `0`.
pub fn sup_invariant_lhs(
    model: &MeasureModel,
    k: usize,
    nsamples: u64,
    stream: RngStream,
    workers: usize,
) -> Result<SupInvariantEstimate> {
    let n = model.dim();
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    let counts = worker_counts(nsamples, workers);
    let partials: Result<Vec<(RunningStat, u64)>> = counts
        .par_iter()
        .enumerate()
        .map(|(w, &cnt)| {
            let mut rng = stream.substream(w as u64).rng();
            let mut stat = RunningStat::new();
            let mut rejected = 0u64;
            for _ in 0..cnt {
                let a = model.sample(&mut rng);
                match invariant_topk_sum(&a, k) {
                    Ok(r) => stat.push(r.value.max(0.0)),
                    Err(Error::NonGenericSpectrum { .. }) => rejected += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok((stat, rejected))
        })
        .collect();
    let mut total = RunningStat::new();
    let mut rejected = 0u64;
    for (s, r) in partials? {
        total.merge(&s);
        rejected += r;
    }
    Ok(SupInvariantEstimate { estimate: total.estimate(), rejected, attempted: nsamples })
}
