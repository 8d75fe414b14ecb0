//! Symmetric polynomials in the monomial basis with exact rational
//! coefficients.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

use super::partition::Partition;

/// Homogeneous symmetric polynomial in `nvars` variables, stored as a map
/// from partitions to exact coefficients of the monomial symmetric functions
/// `m_lambda`.  Only partitions with at most `nvars` parts are admissible
/// (others are identically zero in `nvars` variables).
#[derive(Debug, Clone, PartialEq)]
pub struct SymPolyM {
    nvars: usize,
    coeffs: BTreeMap<Partition, BigRational>,
}

impl SymPolyM {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, coeffs: BTreeMap::new() }
    }

    /// The single monomial symmetric function `m_lambda`.
    pub fn monomial(lambda: &Partition, nvars: usize) -> Result<Self> {
        if lambda.len() > nvars {
            return Err(Error::InvalidPartition(format!(
                "m[{lambda}] vanishes in {nvars} variables"
            )));
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(lambda.clone(), BigRational::one());
        Ok(Self { nvars, coeffs })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, lambda: &Partition) -> BigRational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Add `c * m_lambda`, dropping the term if it cancels to zero.
    pub fn add_term(&mut self, lambda: &Partition, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(lambda.len() <= self.nvars);
        let entry = self.coeffs.entry(lambda.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(lambda);
        }
    }

    /// Evaluate at a float point with `nvars` coordinates.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        let mut total = 0.0;
        for (lambda, c) in &self.coeffs {
            let mut msum = 0.0;
            for_each_distinct_permutation(&lambda.padded(self.nvars), &mut |perm| {
                let mut prod = 1.0;
                for (x, &e) in point.iter().zip(perm) {
                    prod *= x.powi(e as i32);
                }
                msum += prod;
            });
            total += c.to_f64().expect("rational coefficient fits f64") * msum;
        }
        total
    }

    /// Evaluate at an exact rational point.
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        let mut total = BigRational::zero();
        for (lambda, c) in &self.coeffs {
            let mut msum = BigRational::zero();
            for_each_distinct_permutation(&lambda.padded(self.nvars), &mut |perm| {
                let mut prod = BigRational::one();
                for (x, &e) in point.iter().zip(perm) {
                    prod *= rational_pow(x, e);
                }
                msum += prod;
            });
            total += c * msum;
        }
        total
    }

    /// Exact value at the all-ones point: each `m_lambda` contributes the
    /// number of distinct rearrangements of its padded exponent vector.
    pub fn eval_at_ones(&self) -> BigRational {
        let mut total = BigRational::zero();
        for (lambda, c) in &self.coeffs {
            total += c * BigRational::from_integer(count_rearrangements(lambda, self.nvars));
        }
        total
    }

    /// Human-readable expansion, e.g. `m[2] + 2/3 m[1,1]`.  Terms appear in
    /// descending lexicographic partition order.
    pub fn to_expansion_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (lambda, c) in self.coeffs.iter().rev() {
            let negative = c < &BigRational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push_str("- ");
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !abs.is_one() || lambda.is_empty() {
                out.push_str(&abs.to_string());
                if !lambda.is_empty() {
                    out.push(' ');
                }
            }
            if !lambda.is_empty() {
                out.push_str(&format!("m[{lambda}]"));
            }
        }
        out
    }
}

/// Number of distinct rearrangements of the padded exponent vector of
/// `lambda` in `nvars` slots: `nvars! / (prod multiplicity!)`.
pub fn count_rearrangements(lambda: &Partition, nvars: usize) -> BigInt {
    let padded = lambda.padded(nvars);
    let mut num = BigInt::one();
    for i in 2..=nvars {
        num *= BigInt::from(i);
    }
    let mut mult: BTreeMap<u32, usize> = BTreeMap::new();
    for e in padded {
        *mult.entry(e).or_insert(0) += 1;
    }
    for (_, m) in mult {
        for i in 2..=m {
            num /= BigInt::from(i);
        }
    }
    num
}

/// Call `f` once per distinct permutation of `vals`.
///
/// Recursion on positions with deduplication by value: at each position we
/// place each *distinct* remaining value once.
pub fn for_each_distinct_permutation(vals: &[u32], f: &mut impl FnMut(&[u32])) {
    let mut counts: Vec<(u32, usize)> = Vec::new();
    let mut sorted = vals.to_vec();
    sorted.sort_unstable();
    for v in sorted {
        match counts.last_mut() {
            Some((val, c)) if *val == v => *c += 1,
            _ => counts.push((v, 1)),
        }
    }
    let mut current = Vec::with_capacity(vals.len());
    recurse(&mut counts, vals.len(), &mut current, f);

    fn recurse(
        counts: &mut Vec<(u32, usize)>,
        remaining: usize,
        current: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]),
    ) {
        if remaining == 0 {
            f(current);
            return;
        }
        for i in 0..counts.len() {
            if counts[i].1 == 0 {
                continue;
            }
            counts[i].1 -= 1;
            current.push(counts[i].0);
            recurse(counts, remaining - 1, current, f);
            current.pop();
            counts[i].1 += 1;
        }
    }
}

fn rational_pow(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}
