//! Textual specs for partitions, rationals, matrices, and factor models.
//!
//! Matrix specs:
//! * `diag:a1,a2,...` — diagonal matrix,
//! * `rows:a,b;c,d` — explicit entries, rows separated by `;`,
//! * `randsv:min,max,seed` — `U diag(s) V^T` with Haar `U`, `V` and singular
//!   values log-uniform in `[min, max]`, all drawn from the given seed; the
//!   dimension comes from the surrounding command (`--n` or `--k`).
//!
//! Model specs: `point:<matrix>`, `lefthaar:<matrix>`, `twosided:s1,s2,...`.

use glyap_core::linalg::haar_orthogonal;
use glyap_core::lyapunov::MeasureModel;
use glyap_core::symfun::Partition;
use glyap_core::{Matrix, RngStream};
use num::{BigInt, BigRational, One, Zero};
use rand::Rng;

use crate::config::CliError;

/// Comma-separated parts in any order; sorted into a partition.
pub fn parse_partition(s: &str) -> Result<Partition, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Partition::empty());
    }
    let mut parts = Vec::new();
    for piece in s.split(',') {
        let p: u32 = piece
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad partition part {piece:?} in {s:?}")))?;
        parts.push(p);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition::new(parts)?)
}

/// `p`, `p/q`, or a finite decimal such as `2.5`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let bad = || CliError::usage(format!("bad rational {s:?} (use p, p/q, or a finite decimal)"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(CliError::usage(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let signed_f = if negative { -f } else { f };
        return Ok(BigRational::new(w * &scale + signed_f, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for piece in s.split(',') {
        let v: f64 = piece
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad {what} entry {piece:?} in {s:?}")))?;
        if !v.is_finite() {
            return Err(CliError::usage(format!("non-finite {what} entry in {s:?}")));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(CliError::usage(format!("empty {what} list")));
    }
    Ok(out)
}

pub fn parse_usize_list(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for piece in s.split(',') {
        let v: usize = piece
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad {what} entry {piece:?} in {s:?}")))?;
        out.push(v);
    }
    Ok(out)
}

fn check_dim(dim: usize, expect: Option<usize>, spec: &str) -> Result<(), CliError> {
    if let Some(e) = expect {
        if e != dim {
            return Err(CliError::usage(format!(
                "matrix spec {spec:?} has dimension {dim}, expected {e}"
            )));
        }
    }
    Ok(())
}

/// Parse a square-matrix spec; `expect` pins the dimension when the
/// surrounding command fixes it (mandatory for `randsv`).
pub fn parse_matrix_spec(spec: &str, expect: Option<usize>) -> Result<Matrix, CliError> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("matrix spec {spec:?} needs a kind: prefix")))?;
    match kind {
        "diag" => {
            let d = parse_f64_list(rest, "diagonal")?;
            check_dim(d.len(), expect, spec)?;
            Ok(Matrix::diagonal(&d))
        }
        "rows" => {
            let mut rows = Vec::new();
            for row in rest.split(';') {
                rows.push(parse_f64_list(row, "row")?);
            }
            let m = Matrix::from_rows(&rows)?;
            if !m.is_square() {
                return Err(CliError::usage(format!(
                    "matrix spec {spec:?} is {}x{}, expected square",
                    m.rows(),
                    m.cols()
                )));
            }
            check_dim(m.rows(), expect, spec)?;
            Ok(m)
        }
        "randsv" => {
            let pieces: Vec<&str> = rest.split(',').collect();
            if pieces.len() != 3 {
                return Err(CliError::usage(format!("randsv spec {spec:?} needs min,max,seed")));
            }
            let min: f64 = pieces[0]
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad randsv min in {spec:?}")))?;
            let max: f64 = pieces[1]
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad randsv max in {spec:?}")))?;
            let seed: u64 = pieces[2]
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad randsv seed in {spec:?}")))?;
            if !(min > 0.0) || !(max >= min) || !max.is_finite() {
                return Err(CliError::usage(format!(
                    "randsv range in {spec:?} must satisfy 0 < min <= max"
                )));
            }
            let n = expect.ok_or_else(|| {
                CliError::usage(format!(
                    "randsv spec {spec:?} needs the dimension from the command (--n or --k)"
                ))
            })?;
            let mut rng = RngStream::from_seed(seed).rng();
            let svals: Vec<f64> =
                (0..n).map(|_| rng.random_range(min.ln()..=max.ln()).exp()).collect();
            let u = haar_orthogonal(n, &mut rng);
            let v = haar_orthogonal(n, &mut rng);
            Ok(u.mul(&Matrix::diagonal(&svals)).mul(&v.transpose()))
        }
        other => Err(CliError::usage(format!(
            "unknown matrix spec kind {other:?} (use diag:, rows:, or randsv:)"
        ))),
    }
}

/// Parse a factor-model spec; `expect_n` pins the dimension when given.
pub fn parse_model_spec(spec: &str, expect_n: Option<usize>) -> Result<MeasureModel, CliError> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("model spec {spec:?} needs a kind: prefix")))?;
    match kind {
        "point" => Ok(MeasureModel::point_mass(parse_matrix_spec(rest, expect_n)?)?),
        "lefthaar" => Ok(MeasureModel::left_haar_orbit(parse_matrix_spec(rest, expect_n)?)?),
        "twosided" => {
            let svals = parse_f64_list(rest, "singular value")?;
            check_dim(svals.len(), expect_n, spec)?;
            Ok(MeasureModel::two_sided_haar_orbit(&svals)?)
        }
        other => Err(CliError::usage(format!(
            "unknown model kind {other:?} (use point:, lefthaar:, or twosided:)"
        ))),
    }
}

/// Squared diagonal entries as exact rationals, for the exact coefficient
/// path.  Only `diag:` specs stay exact; every other spec goes through
/// floating-point singular values.
pub fn diag_squares_exact(spec: &str) -> Option<Vec<BigRational>> {
    let rest = spec.strip_prefix("diag:")?;
    let mut out = Vec::new();
    for piece in rest.split(',') {
        let r = parse_rational(piece).ok()?;
        if r.is_zero() {
            return None;
        }
        out.push(&r * &r);
    }
    Some(out)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Shared fixture: the 2x2-box worked example (squared singular values
/// 2, 3 on the inverted side and 5, 7 on the direct side).
pub fn example_box_2x2() -> (Vec<BigRational>, Vec<BigRational>, Matrix, Matrix) {
    let a_sq: Vec<BigRational> =
        [2, 3].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    let b_sq: Vec<BigRational> =
        [5, 7].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    let b1 = Matrix::diagonal(&[2f64.sqrt(), 3f64.sqrt()]);
    let b2 = Matrix::diagonal(&[5f64.sqrt(), 7f64.sqrt()]);
    (a_sq, b_sq, b1, b2)
}

/// Shared fixture: the 2x4-box worked example (squared singular values
/// 2, 3 against 5, 7, 11, 13).
pub fn example_box_2x4() -> (Vec<BigRational>, Vec<BigRational>, Matrix, Matrix) {
    let a_sq: Vec<BigRational> =
        [2, 3].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    let b_sq: Vec<BigRational> =
        [5, 7, 11, 13].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    let b1 = Matrix::diagonal(&[2f64.sqrt(), 3f64.sqrt()]);
    let b2 = Matrix::diagonal(&[5f64.sqrt(), 7f64.sqrt(), 11f64.sqrt(), 13f64.sqrt()]);
    (a_sq, b_sq, b1, b2)
}

/// Closed forms for the worked examples, computed independently of the
/// series code: the top coefficient is `prod b / prod a` per box column,
/// and the 2x4 box adds `e2(b) / (6 a1 a2)` in degree four.
pub fn closed_form_c_top(a_sq: &[BigRational], b_sq: &[BigRational]) -> BigRational {
    let prod_b: BigRational = b_sq.iter().product();
    let mut prod_a = BigRational::one();
    for a in a_sq {
        for _ in 0..(b_sq.len() / a_sq.len()) {
            prod_a *= a;
        }
    }
    prod_b / prod_a
}

pub fn closed_form_c4_2x4(a_sq: &[BigRational], b_sq: &[BigRational]) -> BigRational {
    let mut e2 = BigRational::zero();
    for i in 0..b_sq.len() {
        for j in (i + 1)..b_sq.len() {
            e2 += &b_sq[i] * &b_sq[j];
        }
    }
    e2 / (BigRational::from_integer(BigInt::from(6)) * &a_sq[0] * &a_sq[1])
}
