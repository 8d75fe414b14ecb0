//! Shared oracles for the integration suites.
//!
//! Everything here recomputes library quantities through an independent
//! route: eigenvalues via Durand-Kerner root finding instead of a Schur
//! decomposition, symmetric-function identities via the deformed Hall
//! pairing in the power-sum basis, group averages via quadrature instead of
//! Monte Carlo, and subspace counts via exhaustive enumeration.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;

use glyap_core::linalg::{char_poly, haar_orthogonal, kron_operator};
use glyap_core::symfun::{for_each_distinct_permutation, partitions_of, Partition, SymPolyM};
use glyap_core::Matrix;

// ---------------------------------------------------------------------------
// Polynomial roots: Durand-Kerner iteration on the characteristic polynomial.
// ---------------------------------------------------------------------------

fn c_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn c_sub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

fn c_div(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn c_abs(a: (f64, f64)) -> f64 {
    a.0.hypot(a.1)
}

/// All complex roots of a monic polynomial `c[0] + c[1] x + ... + x^n`
/// (the trailing 1 is `c[n]`), by simultaneous Durand-Kerner iteration.
pub fn durand_kerner_roots(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    assert!((coeffs[n] - 1.0).abs() < 1e-12, "expect a monic polynomial");
    if n == 0 {
        return Vec::new();
    }
    let radius = 1.0 + coeffs.iter().take(n).fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            // Non-real, non-symmetric start angles avoid stalling on real or
            // conjugate-symmetric root sets.
            let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64 + 0.45;
            (radius * t.cos(), radius * t.sin())
        })
        .collect();
    let eval = |x: (f64, f64)| {
        let mut acc = (0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = c_mul(acc, x);
            acc.0 += c;
        }
        acc
    };
    let tol = 1e-13 * radius;
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = (1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom = c_mul(denom, c_sub(z[i], z[j]));
                }
            }
            let step = c_div(eval(z[i]), denom);
            z[i] = c_sub(z[i], step);
            moved = moved.max(c_abs(step));
        }
        if moved < tol {
            break;
        }
    }
    z
}

/// Eigenvalue log-moduli of `a` via Durand-Kerner roots of the
/// characteristic polynomial, sorted non-increasing.  Shares no eigenvalue
/// code with the library path (which goes through a Schur factorization).
pub fn oracle_log_moduli(a: &Matrix) -> Vec<f64> {
    let roots = durand_kerner_roots(&char_poly(a));
    let mut logs: Vec<f64> = roots.iter().map(|&z| c_abs(z).ln()).collect();
    logs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    logs
}

// ---------------------------------------------------------------------------
// Spectrum units and brute-force invariant-subset search.
// ---------------------------------------------------------------------------

/// Complex-conjugation-stable spectrum pieces: real eigenvalues carry weight
/// one, conjugate pairs weight two.  `(weight, log-modulus sum)` per unit.
pub fn spectrum_units(eigs: &[(f64, f64)], pair_tol: f64) -> Vec<(usize, f64)> {
    let mut used = vec![false; eigs.len()];
    let mut units = Vec::new();
    for i in 0..eigs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (re, im) = eigs[i];
        if im.abs() <= pair_tol * (1.0 + re.abs()) {
            units.push((1, re.hypot(im).ln()));
        } else {
            // Find the conjugate partner: nearest unused eigenvalue to (re, -im).
            let mut best = None;
            let mut best_d = f64::INFINITY;
            for (j, &(rj, ij)) in eigs.iter().enumerate() {
                if !used[j] {
                    let d = (rj - re).hypot(ij + im);
                    if d < best_d {
                        best_d = d;
                        best = Some(j);
                    }
                }
            }
            let j = best.expect("conjugate partner");
            used[j] = true;
            units.push((2, eigs[i].0.hypot(eigs[i].1).ln() + eigs[j].0.hypot(eigs[j].1).ln()));
        }
    }
    units
}

/// Exhaustive maximum of the log-modulus sum over conjugation-stable
/// eigenvalue subsets of total size `k`.  Returns `None` when no subset of
/// units hits the size exactly.
pub fn brute_best_invariant_sum(units: &[(usize, f64)], k: usize) -> Option<f64> {
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << units.len()) {
        let mut w = 0usize;
        let mut s = 0.0;
        for (i, &(wi, si)) in units.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w += wi;
                s += si;
            }
        }
        if w == k {
            best = Some(best.map_or(s, |b: f64| b.max(s)));
        }
    }
    best
}

/// Exhaustive count of conjugation-stable eigenvalue subsets of size `k`.
pub fn brute_invariant_count(units: &[(usize, f64)], k: usize) -> u64 {
    let mut count = 0u64;
    for mask in 0u32..(1 << units.len()) {
        let mut w = 0usize;
        for (i, &(wi, _)) in units.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w += wi;
            }
        }
        if w == k {
            count += 1;
        }
    }
    count
}

// ---------------------------------------------------------------------------
// Exact symmetric-function machinery: full monomial expansions over the
// rationals, power-sum conversion, and the alpha-deformed Hall pairing.
// ---------------------------------------------------------------------------

/// Dense homogeneous symmetric polynomial: exponent vector -> coefficient.
/// Faithful (no truncation) as long as `nvars >= degree`.
pub type FullPoly = BTreeMap<Vec<u32>, BigRational>;

/// Expand an `m`-basis polynomial into plain monomials.
pub fn full_from_sympoly(p: &SymPolyM) -> FullPoly {
    let mut out = FullPoly::new();
    for (lambda, c) in p.coeffs() {
        for_each_distinct_permutation(&lambda.padded(p.nvars()), &mut |exps| {
            *out.entry(exps.to_vec()).or_insert_with(BigRational::zero) += c;
        });
    }
    out
}

pub fn full_mul(a: &FullPoly, b: &FullPoly) -> FullPoly {
    let mut out = FullPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The power sum `p_j` in `nvars` variables as a dense polynomial.
pub fn power_sum_full(j: u32, nvars: usize) -> FullPoly {
    let mut out = FullPoly::new();
    for i in 0..nvars {
        let mut e = vec![0u32; nvars];
        e[i] = j;
        out.insert(e, BigRational::one());
    }
    out
}

/// The product `p_lambda = p_{lambda_1} p_{lambda_2} ...` expanded into
/// monomials.
pub fn p_lambda_full(lambda: &Partition, nvars: usize) -> FullPoly {
    let mut acc = FullPoly::new();
    acc.insert(vec![0u32; nvars], BigRational::one());
    for &part in lambda.parts() {
        acc = full_mul(&acc, &power_sum_full(part, nvars));
    }
    acc
}

/// Collect a dense polynomial back to monomial-symmetric coordinates by
/// reading off coefficients at the sorted representative exponent.
pub fn orbits_from_full(full: &FullPoly) -> BTreeMap<Partition, BigRational> {
    let mut out = BTreeMap::new();
    for (e, c) in full {
        if c.is_zero() {
            continue;
        }
        let sorted = {
            let mut s = e.clone();
            s.sort_unstable_by(|a, b| b.cmp(a));
            s
        };
        if &sorted == e {
            out.insert(Partition::from_exponents(e), c.clone());
        }
    }
    out
}

/// `z_lambda = prod_j j^{m_j} m_j!` over the part multiplicities.
pub fn z_lambda(lambda: &Partition) -> BigInt {
    let mut z = BigInt::one();
    let mut run = 0u64;
    let parts = lambda.parts();
    for (i, &p) in parts.iter().enumerate() {
        run += 1;
        z *= BigInt::from(p);
        if i + 1 == parts.len() || parts[i + 1] != p {
            for f in 1..=run {
                z *= BigInt::from(f);
            }
            run = 0;
        }
    }
    z
}

fn multiplicity_factorial(lambda: &Partition) -> BigInt {
    let mut z = BigInt::one();
    let mut run = 0u64;
    let parts = lambda.parts();
    for (i, &p) in parts.iter().enumerate() {
        run += 1;
        if i + 1 == parts.len() || parts[i + 1] != p {
            for f in 1..=run {
                z *= BigInt::from(f);
            }
            run = 0;
        }
    }
    z
}

/// Rewrite a homogeneous symmetric polynomial (given in the `m` basis with
/// `nvars >= degree`, so nothing is truncated) in the power-sum basis.
///
/// Peels from the lexicographically smallest monomial orbit: `p_kappa` is
/// the unique product whose expansion reaches `m_kappa` from below, with
/// leading coefficient equal to the factorial of the part multiplicities.
pub fn m_to_power_sums(p: &SymPolyM) -> BTreeMap<Partition, BigRational> {
    let degree = p
        .coeffs()
        .keys()
        .next()
        .map_or(0, |lambda| lambda.weight());
    assert!(p.nvars() as u32 >= degree, "need nvars >= degree for a faithful expansion");
    let mut remaining: BTreeMap<Partition, BigRational> = p
        .coeffs()
        .iter()
        .map(|(l, c)| (l.clone(), c.clone()))
        .collect();
    let mut out = BTreeMap::new();
    while let Some((kappa, coeff)) = remaining.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
        let c_kappa = coeff / BigRational::from(multiplicity_factorial(&kappa));
        let expansion = orbits_from_full(&p_lambda_full(&kappa, p.nvars()));
        for (mu, c_mu) in expansion {
            let slot = remaining.entry(mu.clone()).or_insert_with(BigRational::zero);
            *slot -= &c_kappa * c_mu;
            if slot.is_zero() {
                remaining.remove(&mu);
            }
        }
        out.insert(kappa, c_kappa);
    }
    out
}

/// The alpha-deformed Hall pairing `<p_lambda, p_mu> = delta z_lambda
/// alpha^{len}` extended bilinearly.  Inputs must be faithful (enough
/// variables for their degree).
pub fn hall_inner(f: &SymPolyM, g: &SymPolyM, alpha: &BigRational) -> BigRational {
    let fp = m_to_power_sums(f);
    let gp = m_to_power_sums(g);
    let mut acc = BigRational::zero();
    for (lambda, cf) in &fp {
        if let Some(cg) = gp.get(lambda) {
            let mut term = cf * cg * BigRational::from(z_lambda(lambda));
            for _ in 0..lambda.len() {
                term *= alpha;
            }
            acc += term;
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Principal specialization: the hook-type product formula for the
// P-normalized Jack polynomial evaluated at (1, ..., 1).
// ---------------------------------------------------------------------------

/// `P_lambda^{(alpha)}(1^N) = prod_{(i,j) in lambda} (N + alpha (j-1) - (i-1))
/// / (alpha (lambda_i - j) + (lambda'_j - i) + 1)`, rows and columns 1-based.
pub fn principal_specialization(
    lambda: &Partition,
    alpha: &BigRational,
    nvars: usize,
) -> BigRational {
    let conj = lambda.conjugate();
    let conj_parts = conj.parts();
    let mut acc = BigRational::one();
    for (i0, &row) in lambda.parts().iter().enumerate() {
        for j0 in 0..row as usize {
            let arm = BigRational::from(BigInt::from(row as i64 - j0 as i64 - 1));
            let leg = BigInt::from(conj_parts[j0] as i64 - i0 as i64 - 1);
            let num = BigRational::from(BigInt::from(nvars as i64 - i0 as i64))
                + alpha * BigRational::from(BigInt::from(j0 as i64));
            let den = alpha * arm + BigRational::from(leg + BigInt::one());
            acc *= num / den;
        }
    }
    acc
}

/// All partitions of weight at most `max_weight` (including the empty one).
pub fn partitions_up_to(max_weight: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    for w in 0..=max_weight {
        out.extend(partitions_of(w, w as usize));
    }
    out
}

// ---------------------------------------------------------------------------
// Statistical test helpers with 1% critical values.
// ---------------------------------------------------------------------------

/// Two-sample Kolmogorov-Smirnov test at the 1% level.  Returns `true` when
/// the samples are compatible (fail to reject).
pub fn ks_two_sample_ok(xs: &[f64], ys: &[f64]) -> bool {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (a.len(), b.len());
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < n && j < m {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let critical = 1.62762 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt();
    d <= critical
}

/// Chi-squared uniformity test on [0,1) with 36 equal bins at the 1% level
/// (critical value 57.342 at 35 degrees of freedom).  Returns `true` when
/// uniformity is not rejected.
pub fn chisq_uniform_ok(samples: &[f64]) -> bool {
    const BINS: usize = 36;
    let mut counts = [0u64; BINS];
    for &s in samples {
        assert!((0.0..1.0).contains(&s), "sample outside [0,1)");
        counts[((s * BINS as f64) as usize).min(BINS - 1)] += 1;
    }
    let expected = samples.len() as f64 / BINS as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    stat <= 57.342
}

// ---------------------------------------------------------------------------
// Quadrature oracle for the determinant character series on boxes with
// sides of length one or two.
// ---------------------------------------------------------------------------

fn rotation2(theta: f64) -> Matrix {
    Matrix::from_rows(&[
        vec![theta.cos(), -theta.sin()],
        vec![theta.sin(), theta.cos()],
    ])
    .unwrap()
}

fn reflection2(theta: f64) -> Matrix {
    Matrix::from_rows(&[
        vec![theta.cos(), theta.sin()],
        vec![theta.sin(), -theta.cos()],
    ])
    .unwrap()
}

/// Enumerate the orthogonal group in dimension 1 (two points) or 2 (two
/// circle components sampled on an `npoints` periodic grid, which is
/// spectrally accurate for the trigonometric-polynomial integrand).  Each
/// element carries its quadrature weight; weights sum to one.
fn orthogonal_group_grid(n: usize, npoints: usize) -> Vec<(Matrix, f64)> {
    match n {
        1 => vec![
            (Matrix::diagonal(&[1.0]), 0.5),
            (Matrix::diagonal(&[-1.0]), 0.5),
        ],
        2 => {
            let mut out = Vec::with_capacity(2 * npoints);
            let w = 0.5 / npoints as f64;
            for i in 0..npoints {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / npoints as f64;
                out.push((rotation2(theta), w));
                out.push((reflection2(theta), w));
            }
            out
        }
        _ => panic!("quadrature oracle only covers sides 1 and 2"),
    }
}

/// Quadrature value of the Haar average `E det(Id - u (psi2 B2) (x)
/// ((psi1 B1)^{-1})^T)` for `B1` of size 1 or 2 and `B2` of size 1 or 2.
/// Independent of the partition expansion; uses the integral directly.
pub fn j_quadrature_small(b1: &Matrix, b2: &Matrix, u: f64, npoints: usize) -> f64 {
    let g1 = orthogonal_group_grid(b1.rows(), npoints);
    let g2 = orthogonal_group_grid(b2.rows(), npoints);
    let d = b1.rows() * b2.rows();
    let mut acc = 0.0;
    for (psi1, w1) in &g1 {
        let m1 = psi1.mul(b1);
        for (psi2, w2) in &g2 {
            let m2 = psi2.mul(b2);
            let op = kron_operator(&m2, &m1).unwrap();
            let shifted = Matrix::identity(d).sub(&op.scale(u));
            acc += w1 * w2 * shifted.det();
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Random inputs.
// ---------------------------------------------------------------------------

/// Log-uniform draw from `[lo, hi]`.
pub fn log_uniform(lo: f64, hi: f64, rng: &mut impl Rng) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Random square matrix with the given singular values, via two independent
/// Haar rotations.
pub fn matrix_with_svals(svals: &[f64], rng: &mut impl Rng) -> Matrix {
    let n = svals.len();
    let u = haar_orthogonal(n, rng);
    let v = haar_orthogonal(n, rng);
    u.mul(&Matrix::diagonal(svals)).mul(&v.transpose())
}

/// Random Gaussian matrix with independent standard normal entries.
pub fn gaussian_matrix(n: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(n, n, |_, _| {
        rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng)
    })
}

/// A small positive rational from a seeded integer pair, for exact-path
/// golden instances.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
