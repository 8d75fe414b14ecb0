//! The five report-producing commands.

use glyap_core::jchar::{j_exact, j_exact_rational, j_mc_multi};
use glyap_core::linalg::eig_log_moduli;
use glyap_core::lyapunov::{lyapunov_spectrum_qr, topk_sum_grassmann, MeasureModel};
use glyap_core::rng::STREAM_BLOCK;
use glyap_core::stats::RunningStat;
use glyap_core::symfun::jack_in_monomials;
use glyap_core::verify::verify_main_inequality;
use glyap_core::{Matrix, RngStream};
use num::{BigRational, One, Signed, Zero};

use crate::config::{CliError, Resolver};
use crate::report::{Report, ResultRow, Verdict};
use crate::specs::{
    closed_form_c4_2x4, closed_form_c_top, diag_squares_exact, example_box_2x2, example_box_2x4,
    parse_f64_list, parse_matrix_spec, parse_model_spec, parse_partition, parse_rational,
    parse_usize_list, rational_to_f64,
};
use crate::{JackArgs, JmatArgs, LyapArgs, ReproArgs, VerifyArgs};

/// Resolved global parameters shared by every command.
pub struct Globals {
    pub seed: u64,
    pub workers: usize,
}

pub fn cmd_jack(args: &JackArgs, res: &mut Resolver) -> Result<Report, CliError> {
    let lambda_s: String = res.required("lambda", args.lambda.clone())?;
    let lambda = parse_partition(&lambda_s)?;
    let alpha_s: String = res.with_default("alpha", args.alpha.clone(), "2".to_string())?;
    let alpha = parse_rational(&alpha_s)?;
    let nvars = res.with_default("nvars", args.nvars, lambda.len().max(1))?;

    let poly = jack_in_monomials(&lambda, &alpha, nvars)?;
    let mut report = Report::new("jack");
    report.extra.insert("expansion".into(), poly.to_expansion_string());
    for (mu, c) in poly.coeffs().iter().rev() {
        let name = if mu.is_empty() { "m[]".to_string() } else { format!("m[{mu}]") };
        report.push(ResultRow::plain(name, rational_to_f64(c)));
        report.extra.insert(
            format!("coeff m[{mu}]"),
            c.to_string(),
        );
    }
    let ones = poly.eval_at_ones();
    report.extra.insert("value_at_ones".into(), ones.to_string());
    report.push(ResultRow::plain("value_at_ones", rational_to_f64(&ones)));
    Ok(report)
}

/// Exact-path data for one series instance: float coefficients always,
/// rational coefficients when the inputs are exact diagonals.
struct SeriesInstance {
    b1: Matrix,
    b2: Matrix,
    coeffs: Vec<f64>,
    rational: Option<Vec<BigRational>>,
}

impl SeriesInstance {
    fn from_matrices(b1: Matrix, b2: Matrix) -> Result<Self, CliError> {
        let coeffs = j_exact(&b1, &b2)?.coeffs;
        Ok(SeriesInstance { b1, b2, coeffs, rational: None })
    }

    fn with_rational(
        b1: Matrix,
        b2: Matrix,
        a_sq: &[BigRational],
        b_sq: &[BigRational],
    ) -> Result<Self, CliError> {
        let mut inst = Self::from_matrices(b1, b2)?;
        inst.rational = Some(j_exact_rational(a_sq, b_sq)?);
        Ok(inst)
    }

    fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }
}

pub fn cmd_jmat(args: &JmatArgs, g: &Globals, res: &mut Resolver) -> Result<Report, CliError> {
    let paper: Option<String> = res.opt("paper-example", args.paper_example.clone())?;
    let mut report = Report::new("jmat");

    let inst = if let Some(which) = paper {
        for (key, given) in [
            ("k", args.k.is_some()),
            ("n", args.n.is_some()),
            ("b1", args.b1.is_some()),
            ("b2", args.b2.is_some()),
        ] {
            if res.is_given(key, given) {
                return Err(CliError::usage(format!(
                    "--paper-example fixes the instance; drop --{key}"
                )));
            }
        }
        let (a_sq, b_sq, b1, b2) = match which.as_str() {
            "4-2" => example_box_2x2(),
            "6-2" => example_box_2x4(),
            other => {
                return Err(CliError::usage(format!(
                    "unknown --paper-example {other:?} (use 4-2 or 6-2)"
                )))
            }
        };
        let inst = SeriesInstance::with_rational(b1, b2, &a_sq, &b_sq)?;
        let rat = inst.rational.as_ref().expect("rational path present");
        let d = rat.len() - 1;
        let c_top = closed_form_c_top(&a_sq, &b_sq);
        report.push(ResultRow::judged(
            format!("closed_form_c{d}"),
            rational_to_f64(&c_top),
            Verdict::exact(rat[d] == c_top),
        ));
        if which == "6-2" {
            let c4 = closed_form_c4_2x4(&a_sq, &b_sq);
            report.push(ResultRow::judged(
                "closed_form_c4",
                rational_to_f64(&c4),
                Verdict::exact(rat[4] == c4),
            ));
            report.push(ResultRow::judged(
                "closed_form_offbeat_zero",
                0.0,
                Verdict::exact(rat[2].is_zero() && rat[6].is_zero()),
            ));
        }
        inst
    } else {
        let k: usize = res.required("k", args.k)?;
        let n: usize = res.required("n", args.n)?;
        if k < 1 || k >= n {
            return Err(CliError::usage(format!("need 1 <= k < n, got k={k}, n={n}")));
        }
        let b1_s: String = res.required("b1", args.b1.clone())?;
        let b2_s: String = res.required("b2", args.b2.clone())?;
        let b1 = parse_matrix_spec(&b1_s, Some(k))?;
        let b2 = parse_matrix_spec(&b2_s, Some(n - k))?;
        match (diag_squares_exact(&b1_s), diag_squares_exact(&b2_s)) {
            (Some(a_sq), Some(b_sq)) => SeriesInstance::with_rational(b1, b2, &a_sq, &b_sq)?,
            _ => SeriesInstance::from_matrices(b1, b2)?,
        }
    };

    for (j, &c) in inst.coeffs.iter().enumerate() {
        let verdict = inst.rational.as_ref().map(|rat| {
            let exact = rational_to_f64(&rat[j]);
            Verdict::agreement(c, exact, 0.0)
        });
        report.push(ResultRow { name: format!("c{j}"), value: c, stderr: None, verdict });
    }
    if let Some(rat) = &inst.rational {
        for (j, c) in rat.iter().enumerate() {
            if !c.is_zero() {
                report.extra.insert(format!("c{j}_exact"), c.to_string());
            }
        }
    }

    let j1 = inst.eval(1.0);
    report.push(ResultRow::judged(
        "j_at_1_lower_bound",
        j1,
        Verdict::lower_bound(j1, 1.0 - 1e-9, 0.0),
    ));

    let u_s: String = res.with_default("u", args.u.clone(), "1".to_string())?;
    let us = parse_f64_list(&u_s, "u")?;
    for &u in &us {
        report.push(ResultRow::plain(format!("j({u})"), inst.eval(u)));
    }

    let mc = res.switch("mc", args.mc)?;
    let mc_samples: u64 = res.with_default("mc-samples", args.mc_samples, 100_000)?;
    if mc {
        let ests = j_mc_multi(
            &inst.b1,
            &inst.b2,
            &us,
            mc_samples,
            RngStream::new(g.seed, 0),
            g.workers,
        )?;
        for (&u, est) in us.iter().zip(&ests) {
            let exact = inst.eval(u);
            report.push(ResultRow::judged_with_stderr(
                format!("j_mc({u})"),
                est.mean,
                est.stderr,
                Verdict::agreement(est.mean, exact, est.stderr),
            ));
        }
    }
    Ok(report)
}

/// Mean of `log |det A|` over model samples; the `k = n` counterpart of the
/// subspace estimator.
fn log_det_mean(
    model: &MeasureModel,
    nsamples: u64,
    stream: RngStream,
) -> Result<(f64, f64), CliError> {
    let mut rng = stream.rng();
    let mut stat = RunningStat::new();
    for _ in 0..nsamples {
        let a = model.sample(&mut rng);
        let d = a.det().abs();
        if d == 0.0 {
            return Err(CliError::Numeric("sample is singular".into()));
        }
        stat.push(d.ln());
    }
    let est = stat.estimate();
    Ok((est.mean, est.stderr))
}

pub fn cmd_lyap(args: &LyapArgs, g: &Globals, res: &mut Resolver) -> Result<Report, CliError> {
    let model_s: String = res.required("model", args.model.clone())?;
    let n_opt: Option<usize> = res.opt("n", args.n)?;
    let model = parse_model_spec(&model_s, n_opt)?;
    let n = model.dim();
    let m: usize = res.with_default("m", args.m, 10_000)?;
    let nsamples: u64 = res.with_default("nsamples", args.nsamples, 100_000)?;
    let ks = match res.opt("k", args.k.clone())? {
        Some(s) => parse_usize_list(&s, "k")?,
        None => (1..=n).collect(),
    };
    for &k in &ks {
        if k < 1 || k > n {
            return Err(CliError::usage(format!("k={k} outside 1..={n}")));
        }
    }

    let est = lyapunov_spectrum_qr(&model, m, RngStream::new(g.seed, 0))?;
    let mut report = Report::new("lyap");
    for (i, (&r, &se)) in est.exponents.iter().zip(&est.stderr).enumerate() {
        // Batch-means error bars are infinite below two batches; keep the
        // serialized report finite.
        if se.is_finite() {
            report.push(ResultRow::with_stderr(format!("r{}", i + 1), r, se));
        } else {
            report.push(ResultRow::plain(format!("r{}", i + 1), r));
        }
    }

    // Cross-estimator rows need rotation invariance; a point mass only has
    // the cocycle path.
    let invariant = !matches!(model, MeasureModel::PointMass(_));
    for &k in &ks {
        let qr_sum = est.sum_top(k);
        let qr_se = est.sum_top_stderr(k);
        if qr_se.is_finite() {
            report.push(ResultRow::with_stderr(format!("sum_top_{k}_qr"), qr_sum, qr_se));
        } else {
            report.push(ResultRow::plain(format!("sum_top_{k}_qr"), qr_sum));
        }
        if !invariant {
            continue;
        }
        let (mc_mean, mc_se) = if k < n {
            let e = topk_sum_grassmann(
                &model,
                k,
                nsamples,
                RngStream::new(g.seed, k as u64 * STREAM_BLOCK),
                g.workers,
            )?;
            (e.mean, e.stderr)
        } else {
            log_det_mean(&model, nsamples, RngStream::new(g.seed, n as u64 * STREAM_BLOCK))?
        };
        report.push(ResultRow::with_stderr(format!("sum_top_{k}_subspace"), mc_mean, mc_se));
        let sigma = (qr_se * qr_se + mc_se * mc_se).sqrt();
        if sigma.is_finite() {
            report.push(ResultRow::judged_with_stderr(
                format!("sum_top_{k}_gap"),
                qr_sum - mc_mean,
                sigma,
                Verdict::agreement(qr_sum, mc_mean, sigma),
            ));
        }
    }
    Ok(report)
}

pub fn cmd_verify_main(
    args: &VerifyArgs,
    g: &Globals,
    res: &mut Resolver,
) -> Result<Report, CliError> {
    let model_s: String = res.required("model", args.model.clone())?;
    let n_opt: Option<usize> = res.opt("n", args.n)?;
    let model = parse_model_spec(&model_s, n_opt)?;
    let n = model.dim();
    let k: usize = res.required("k", args.k)?;
    if k < 1 || k > n {
        return Err(CliError::usage(format!("k={k} outside 1..={n}")));
    }
    let nsamples: u64 = res.with_default("nsamples", args.nsamples, 100_000)?;
    let pointwise: u64 = res.with_default("pointwise-samples", args.pointwise_samples, 1_000)?;

    let rep = verify_main_inequality(
        &model,
        k,
        nsamples,
        pointwise,
        RngStream::new(g.seed, 0),
        g.workers,
    )?;

    let mut report = Report::new("verify-main");
    report.push(ResultRow::with_stderr(
        "sup_invariant_lhs",
        rep.sup_lhs.estimate.mean,
        rep.sup_lhs.estimate.stderr,
    ));
    report.push(ResultRow::with_stderr("topk_eigen_lhs", rep.mean_lhs.mean, rep.mean_lhs.stderr));
    report.push(ResultRow::with_stderr("rhs_plus", rep.rhs_plus.mean, rep.rhs_plus.stderr));
    report.push(ResultRow::with_stderr(
        "rhs_scaled",
        rep.rhs_plus.mean / rep.binom,
        rep.rhs_plus.stderr / rep.binom,
    ));
    report.push(ResultRow::plain("binomial", rep.binom));
    report.push(ResultRow::judged_with_stderr(
        "margin",
        rep.margin,
        rep.margin_sigma,
        Verdict::lower_bound(rep.margin, 0.0, rep.margin_sigma),
    ));
    report.push(ResultRow::plain("pointwise_checked", rep.pointwise_checked as f64));
    report.push(ResultRow::judged(
        "pointwise_violations",
        rep.pointwise_violations as f64,
        Verdict::exact(rep.pointwise_violations == 0),
    ));
    report.push(ResultRow::plain("pointwise_skipped", rep.pointwise_skipped as f64));
    report.push(ResultRow::judged(
        "rejection_rate",
        rep.sup_lhs.rejection_rate(),
        Verdict::exact(!rep.sup_lhs.flagged()),
    ));
    report.rejections = Some(rep.sup_lhs.rejected);
    Ok(report)
}

pub fn cmd_repro_paper(
    args: &ReproArgs,
    g: &Globals,
    res: &mut Resolver,
) -> Result<Report, CliError> {
    let mc_confirm = res.switch("mc-confirm", args.mc_confirm)?;
    let mc_samples: u64 = res.with_default("mc-samples", args.mc_samples, 100_000)?;
    let mut report = Report::new("repro-paper");

    // Worked example, 2x2 box: the only off-constant coefficient is the top
    // one, equal to the product ratio of squared singular values.
    let (a_sq, b_sq, b1_22, b2_22) = example_box_2x2();
    let rat = j_exact_rational(&a_sq, &b_sq)?;
    let c_top = closed_form_c_top(&a_sq, &b_sq);
    report.push(ResultRow::judged(
        "case22_c4",
        rational_to_f64(&rat[4]),
        Verdict::exact(rat[4] == c_top),
    ));
    let max_mid = rat[1..4].iter().map(|c| rational_to_f64(&c.abs())).fold(0.0, f64::max);
    report.push(ResultRow::judged(
        "case22_offgrid_max",
        max_mid,
        Verdict::exact(rat[1..4].iter().all(|c| c.is_zero())),
    ));
    let j1_22 = rat.iter().fold(BigRational::zero(), |acc, c| acc + c);
    report.push(ResultRow::judged(
        "case22_j_at_1",
        rational_to_f64(&j1_22),
        Verdict::exact(j1_22 >= BigRational::one()),
    ));

    // Worked example, 2x4 box: degrees 2 and 6 vanish, degree 4 carries
    // e2(b)/(6 a1 a2), degree 8 the squared determinant ratio.
    let (a_sq, b_sq, b1_24, b2_24) = example_box_2x4();
    let rat = j_exact_rational(&a_sq, &b_sq)?;
    report.push(ResultRow::judged(
        "case24_c2_c6_zero",
        0.0,
        Verdict::exact(rat[2].is_zero() && rat[6].is_zero()),
    ));
    let c4 = closed_form_c4_2x4(&a_sq, &b_sq);
    report.push(ResultRow::judged(
        "case24_c4",
        rational_to_f64(&rat[4]),
        Verdict::exact(rat[4] == c4),
    ));
    let c8 = closed_form_c_top(&a_sq, &b_sq);
    report.push(ResultRow::judged(
        "case24_c8",
        rational_to_f64(&rat[8]),
        Verdict::exact(rat[8] == c8),
    ));

    // Point-mass spectrum: exponents are the log-moduli of the fixed factor.
    let model = MeasureModel::point_mass(Matrix::diagonal(&[2.0, 1.0, 0.5]))?;
    let est = lyapunov_spectrum_qr(&model, 10_000, RngStream::new(g.seed, 0))?;
    let targets = [2f64.ln(), 0.0, -(2f64.ln())];
    for (i, (&r, &t)) in est.exponents.iter().zip(&targets).enumerate() {
        report.push(ResultRow::judged(
            format!("pointmass_r{}", i + 1),
            r,
            Verdict::exact((r - t).abs() <= 1e-4),
        ));
    }

    // Determinant-one model: sorted per-sample prefix sums of eigenvalue
    // log-moduli stay nonnegative (total is zero, order is decreasing).
    let sl_model = MeasureModel::two_sided_haar_orbit(&[2.0, 0.5])?;
    let mut rng = RngStream::new(g.seed, STREAM_BLOCK).rng();
    let sl_samples = 1_000u64;
    let mut min_prefix = f64::INFINITY;
    for _ in 0..sl_samples {
        let a = sl_model.sample(&mut rng);
        let e = eig_log_moduli(&a)?;
        for k in 1..=2 {
            min_prefix = min_prefix.min(e.sum_top(k));
        }
    }
    report.push(ResultRow::judged(
        "unimodular_min_prefix",
        min_prefix,
        Verdict::exact(min_prefix >= -1e-10),
    ));
    report.push(ResultRow::plain("unimodular_samples", sl_samples as f64));

    if mc_confirm {
        for (block, (tag, b1, b2)) in
            [("case22", b1_22, b2_22), ("case24", b1_24, b2_24)].into_iter().enumerate()
        {
            let exact = j_exact(&b1, &b2)?.at_one();
            let est = j_mc_multi(
                &b1,
                &b2,
                &[1.0],
                mc_samples,
                RngStream::new(g.seed, (2 + block as u64) * STREAM_BLOCK),
                g.workers,
            )?
            .pop()
            .expect("one evaluation point");
            report.push(ResultRow::judged_with_stderr(
                format!("{tag}_j1_mc"),
                est.mean,
                est.stderr,
                Verdict::agreement(est.mean, exact, est.stderr),
            ));
        }
    }
    Ok(report)
}
