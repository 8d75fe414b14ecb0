//! Streaming statistics for Monte Carlo estimators.

/// Welford accumulator: numerically stable running mean and variance that can
/// be merged across workers.  Merging in a fixed order reproduces the
/// single-threaded result bit-for-bit given the same per-worker inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningStat {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStat {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. parallel combination of two accumulators.
    pub fn merge(&mut self, other: &RunningStat) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n1 = self.n as f64;
        let n2 = other.n as f64;
        let delta = other.mean - self.mean;
        let total = n1 + n2;
        self.mean += delta * n2 / total;
        self.m2 += other.m2 + delta * delta * n1 * n2 / total;
        self.n += other.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; infinite below two samples.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            f64::INFINITY
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean under iid sampling.
    pub fn stderr(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }

    pub fn estimate(&self) -> McEstimate {
        McEstimate { mean: self.mean(), stderr: self.stderr(), n: self.n }
    }
}

/// A Monte Carlo point estimate with its iid standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

/// Standard error of the mean of a correlated series by non-overlapping batch
/// means.  Splits the series into `batches` nearly equal consecutive batches
/// and returns the standard error of the batch-mean sample.  Infinite when
/// fewer than two batches can be formed.
pub fn batch_means_stderr(series: &[f64], batches: usize) -> f64 {
    let m = series.len();
    let b = batches.min(m);
    if b < 2 {
        return f64::INFINITY;
    }
    let mut stat = RunningStat::new();
    let base = m / b;
    let extra = m % b;
    let mut start = 0;
    for i in 0..b {
        let len = base + usize::from(i < extra);
        let chunk = &series[start..start + len];
        stat.push(chunk.iter().sum::<f64>() / len as f64);
        start += len;
    }
    debug_assert_eq!(start, m);
    // Batch means are near-independent for large batches; their spread over
    // sqrt(b) estimates the error of the grand mean.
    (stat.variance() / b as f64).sqrt()
}
