//! Jack symmetric polynomials in `P`-normalization, by triangular solve.
//!
//! `P_lambda^(alpha)` is the unique eigenfunction of the degree-preserving
//! operator
//!
//! ```text
//! E = sum_i x_i^2 d_i^2 + (2/alpha) sum_{i != j} x_i^2 / (x_i - x_j) d_i
//! ```
//!
//! of the form `m_lambda + (dominance-lower monomial terms)`.  The operator
//! acts triangularly on the monomial basis, so the coefficients come out of
//! a back-substitution with pivots `e_lambda - e_mu > 0` for `alpha > 0`.
//! All arithmetic is exact rational.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

use super::partition::{partitions_of, Partition};
use super::sympoly::{for_each_distinct_permutation, SymPolyM};

/// Expansion of `P_lambda^(alpha)` in monomial symmetric functions of
/// `nvars` variables, with exact rational coefficients.
///
/// Errors: `InvalidPartition` when `lambda` has more than `nvars` parts
/// (the polynomial vanishes there and the normalization breaks down),
/// `InvalidPoint` for non-positive `alpha`.
pub fn jack_in_monomials(
    lambda: &Partition,
    alpha: &BigRational,
    nvars: usize,
) -> Result<SymPolyM> {
    if !alpha.is_positive() {
        return Err(Error::InvalidPoint(format!("Jack parameter must be positive, got {alpha}")));
    }
    if lambda.len() > nvars {
        return Err(Error::InvalidPartition(format!(
            "partition [{lambda}] has more than {nvars} parts"
        )));
    }
    let d = lambda.weight();
    let mut poly = SymPolyM::zero(nvars);
    if d == 0 {
        poly.add_term(&Partition::empty(), &BigRational::one());
        return Ok(poly);
    }

    let basis = partitions_of(d, nvars);
    let pos = basis.iter().position(|p| p == lambda).expect("lambda lies in its own basis");

    // Operator columns E m_nu for every candidate source nu <= lambda
    // (descending lexicographic order refines dominance).
    let columns: Vec<BTreeMap<Partition, BigRational>> =
        basis[pos..].iter().map(|nu| apply_operator(nu, alpha, nvars)).collect();
    let e_lambda = eigenvalue(lambda, alpha, nvars);

    #[cfg(debug_assertions)]
    for (nu, col) in basis[pos..].iter().zip(&columns) {
        // Triangularity: E m_nu only involves m_kappa with kappa <= nu, and
        // the diagonal coefficient equals the eigenvalue formula (absent
        // entries are zeros).
        debug_assert!(col.keys().all(|kappa| kappa <= nu));
        let diag = col.get(nu).cloned().unwrap_or_else(BigRational::zero);
        debug_assert_eq!(diag, eigenvalue(nu, alpha, nvars));
    }

    let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); basis.len() - pos];
    coeffs[0] = BigRational::one();
    for rel_mu in 1..coeffs.len() {
        let mu = &basis[pos + rel_mu];
        let mut num = BigRational::zero();
        for rel_nu in 0..rel_mu {
            if coeffs[rel_nu].is_zero() {
                continue;
            }
            if let Some(a) = columns[rel_nu].get(mu) {
                num += a * &coeffs[rel_nu];
            }
        }
        if num.is_zero() {
            continue;
        }
        let pivot = &e_lambda - eigenvalue(mu, alpha, nvars);
        assert!(!pivot.is_zero(), "vanishing pivot for mu = [{mu}] under lambda = [{lambda}]");
        coeffs[rel_mu] = num / pivot;
    }

    for (rel, c) in coeffs.iter().enumerate() {
        poly.add_term(&basis[pos + rel], c);
    }
    Ok(poly)
}

/// Eigenvalue of `E` on the leading monomial `m_mu`:
/// `sum mu_i (mu_i - 1) + (2/alpha) sum (nvars - i) mu_i` with `i` one-based.
fn eigenvalue(mu: &Partition, alpha: &BigRational, nvars: usize) -> BigRational {
    let mut quad = 0u64;
    let mut lin = 0u64;
    for (idx, &p) in mu.parts().iter().enumerate() {
        quad += p as u64 * (p as u64 - 1);
        lin += (nvars - 1 - idx) as u64 * p as u64;
    }
    BigRational::from_integer(BigInt::from(quad))
        + two_over(alpha) * BigRational::from_integer(BigInt::from(lin))
}

fn two_over(alpha: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(2)) / alpha
}

/// Expand `E m_nu` in the monomial basis.
///
/// The rational-function part of `E` acts on a pair of variables `(x, y)`
/// carrying exponents `u > v` (summing the two orderings) as
///
/// ```text
/// u (x^u y^v + x^v y^u) + (u - v) sum_{r=v+1}^{u-1} x^r y^{u+v-r},
/// ```
///
/// and on `u = v` as `u x^u y^u`.  Summing that over all variable pairs and
/// all monomials of the orbit of `nu`, plus the diagonal second-derivative
/// term, gives the full action.
fn apply_operator(
    nu: &Partition,
    alpha: &BigRational,
    nvars: usize,
) -> BTreeMap<Partition, BigRational> {
    let toa = two_over(alpha);
    let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();

    let add = |acc: &mut BTreeMap<Vec<u32>, BigRational>, key: Vec<u32>, c: BigRational| {
        if c.is_zero() {
            return;
        }
        let entry = acc.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
    };

    for_each_distinct_permutation(&nu.padded(nvars), &mut |a| {
        // Second-derivative diagonal term.
        let dcoef: u64 = a.iter().map(|&ai| ai as u64 * (ai as u64).saturating_sub(1)).sum();
        if dcoef > 0 {
            add(&mut acc, a.to_vec(), BigRational::from_integer(BigInt::from(dcoef)));
        }
        for i in 0..nvars {
            for j in i + 1..nvars {
                let (u, v) = (a[i], a[j]);
                if u == v {
                    if u > 0 {
                        add(&mut acc, a.to_vec(), &toa * BigRational::from_integer(BigInt::from(u)));
                    }
                } else if u > v {
                    // Contribution for this monomial and its (i,j)-swap
                    // together; the swap is skipped when visited.
                    let ucoef = &toa * BigRational::from_integer(BigInt::from(u));
                    add(&mut acc, a.to_vec(), ucoef.clone());
                    let mut swapped = a.to_vec();
                    swapped.swap(i, j);
                    add(&mut acc, swapped, ucoef);
                    let span = &toa * BigRational::from_integer(BigInt::from(u - v));
                    for r in v + 1..u {
                        let mut t = a.to_vec();
                        t[i] = r;
                        t[j] = u + v - r;
                        add(&mut acc, t, span.clone());
                    }
                }
            }
        }
    });

    // Read off one representative monomial per orbit: the descending-sorted
    // exponent vector.
    let mut out = BTreeMap::new();
    for (exps, c) in acc {
        if exps.windows(2).all(|w| w[0] >= w[1]) && !c.is_zero() {
            out.insert(Partition::from_exponents(&exps), c);
        }
    }
    out
}

type ZonalKey = (Partition, usize);

static ZONAL_CACHE: OnceLock<Mutex<HashMap<ZonalKey, Arc<SymPolyM>>>> = OnceLock::new();

/// `P_lambda^(2)` (the spherical-function kernel for orthogonal averages),
/// memoized per `(lambda, nvars)`.
pub fn zonal_in_monomials(lambda: &Partition, nvars: usize) -> Result<Arc<SymPolyM>> {
    let cache = ZONAL_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (lambda.clone(), nvars);
    if let Some(hit) = cache.lock().expect("zonal cache lock").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let poly = Arc::new(jack_in_monomials(lambda, &two, nvars)?);
    cache.lock().expect("zonal cache lock").insert(key, Arc::clone(&poly));
    Ok(poly)
}
