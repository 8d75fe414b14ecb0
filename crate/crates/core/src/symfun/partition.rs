//! Integer partitions.

use std::fmt;

use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive integers.  The empty partition is
/// allowed and indexes the constant symmetric function `1`.
///
/// The derived `Ord` is lexicographic on the part vectors, which refines the
/// dominance order weight-by-weight: if `lambda` strictly dominates `mu` of
/// the same weight then `lambda > mu` lexicographically.  Triangular solves
/// rely on that refinement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validate weak decrease and positivity.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("not weakly decreasing: {parts:?}")));
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Build from arbitrary exponents: sort descending, drop zeros.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v: Vec<u32> = exps.iter().copied().filter(|&e| e > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self(v)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `|lambda|`: sum of parts.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parts padded with zeros to length `n`.  Panics if `n` is too small.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        assert!(n >= self.len(), "padding below partition length");
        let mut v = self.0.clone();
        v.resize(n, 0);
        v
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let max = self.0[0];
        let parts =
            (1..=max).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect();
        Partition(parts)
    }

    /// All parts even.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|&p| p % 2 == 0)
    }

    /// For even partitions, the partition with every part halved.
    pub fn halved(&self) -> Option<Partition> {
        if self.is_even() {
            Some(Partition(self.0.iter().map(|&p| p / 2).collect()))
        } else {
            None
        }
    }

    /// Every part doubled.
    pub fn doubled(&self) -> Partition {
        Partition(self.0.iter().map(|&p| p * 2).collect())
    }

    /// Fits in a `rows x cols` box.
    pub fn fits_in_box(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.0.first().is_none_or(|&p| p <= cols)
    }

    /// Dominance: every prefix sum of `self` is at least the matching prefix
    /// sum of `other`.  Only meaningful for equal weights.
    pub fn dominates(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.weight(), other.weight());
        let n = self.len().max(other.len());
        let mut sa = 0u32;
        let mut sb = 0u32;
        for i in 0..n {
            sa += self.0.get(i).copied().unwrap_or(0);
            sb += other.0.get(i).copied().unwrap_or(0);
            if sa < sb {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

/// All partitions of `weight` fitting in a `max_rows x max_cols` box, in
/// descending lexicographic order.  Weight `0` yields the empty partition.
pub fn partitions_in_box(weight: u32, max_rows: usize, max_cols: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    gen_box(weight, max_cols, max_rows, &mut cur, &mut out);
    out
}

fn gen_box(
    remaining: u32,
    max_part: u32,
    rows_left: usize,
    cur: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    if rows_left == 0 {
        return;
    }
    // Largest first part first gives descending lexicographic output.
    let hi = max_part.min(remaining);
    for p in (1..=hi).rev() {
        // Prune branches that cannot absorb the remaining weight.
        if (p as u64) * (rows_left as u64) < remaining as u64 {
            break;
        }
        cur.push(p);
        gen_box(remaining - p, p, rows_left - 1, cur, out);
        cur.pop();
    }
}

/// All partitions of `weight` with at most `max_rows` parts, descending
/// lexicographic.
pub fn partitions_of(weight: u32, max_rows: usize) -> Vec<Partition> {
    partitions_in_box(weight, max_rows, weight)
}
