//! Acceptance gate: one test per shipping criterion, each printing a
//! PASS/FAIL line (visible under `--nocapture`; the harness result line
//! mirrors it) and enforcing its runtime budget.
//!
//! Monte Carlo criteria run on fixed seeds, so every verdict here is
//! reproducible bit for bit.

mod common;

use std::time::Instant;

use num::{BigRational, One, ToPrimitive, Zero};
use rand::Rng;

use common::{log_uniform, m_to_power_sums, principal_specialization, rational, z_lambda};
use glyap_core::jchar::{j_at_one_check, j_exact, j_exact_rational, j_mc_multi};
use glyap_core::lyapunov::{lyapunov_spectrum_qr, topk_sum_grassmann, MeasureModel};
use glyap_core::rng::STREAM_BLOCK;
use glyap_core::symfun::{f_mu, f_mu_mc, jack_in_monomials, partitions_of};
use glyap_core::verify::verify_main_inequality;
use glyap_core::{Matrix, RngStream};

/// Collects failure messages and reports once, so a criterion prints a
/// single verdict line no matter how many sub-checks it runs.
struct Criterion {
    index: usize,
    label: &'static str,
    budget_secs: f64,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn start(index: usize, label: &'static str, budget_secs: f64) -> Self {
        Self { index, label, budget_secs, started: Instant::now(), failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }

    fn finish(mut self, summary: &str) {
        let elapsed = self.started.elapsed().as_secs_f64();
        if elapsed > self.budget_secs {
            self.failures.push(format!(
                "runtime {elapsed:.1}s exceeded the {:.0}s budget",
                self.budget_secs
            ));
        }
        if self.failures.is_empty() {
            println!(
                "ACCEPTANCE {} {}: PASS ({summary}; {elapsed:.2}s)",
                self.index, self.label
            );
        } else {
            println!("ACCEPTANCE {} {}: FAIL", self.index, self.label);
            panic!(
                "criterion {} failed:\n  {}",
                self.index,
                self.failures.join("\n  ")
            );
        }
    }
}

fn random_rational_sq(rng: &mut impl Rng) -> BigRational {
    rational(rng.random_range(2..=8), rng.random_range(2..=8))
}

#[test]
fn criterion_1_golden_2x2_box() {
    let mut c = Criterion::start(1, "closed form on the 2x2 box", 1.0);
    let mut rng = RngStream::from_seed(0xACC_1).rng();
    for _ in 0..20 {
        let a_sq: Vec<BigRational> = (0..2).map(|_| random_rational_sq(&mut rng)).collect();
        let b_sq: Vec<BigRational> = (0..2).map(|_| random_rational_sq(&mut rng)).collect();
        let coeffs = j_exact_rational(&a_sq, &b_sq).unwrap();
        let want_c4 = (&b_sq[0] * &b_sq[1]) / (&a_sq[0] * &a_sq[1]);
        c.check(coeffs.len() == 5, || "wrong degree".into());
        c.check(coeffs[0].is_one(), || "constant term must be 1".into());
        for j in 1..4 {
            c.check(coeffs[j].is_zero(), || format!("c{j} = {} should vanish", coeffs[j]));
        }
        c.check(coeffs[4] == want_c4, || format!("c4 = {} vs {}", coeffs[4], want_c4));

        // Float route through actual matrices with those singular values.
        let b1 = Matrix::diagonal(&[a_sq[0].to_f64().unwrap().sqrt(), a_sq[1].to_f64().unwrap().sqrt()]);
        let b2 = Matrix::diagonal(&[b_sq[0].to_f64().unwrap().sqrt(), b_sq[1].to_f64().unwrap().sqrt()]);
        let float = j_exact(&b1, &b2).unwrap();
        let gap = (float.coeffs[4] - want_c4.to_f64().unwrap()).abs();
        c.check(gap <= 1e-10, || format!("float c4 off by {gap:.2e}"));
        for j in 1..4 {
            c.check(float.coeffs[j] == 0.0, || format!("float c{j} nonzero"));
        }
    }
    c.finish("20 rational instances exact, float within 1e-10");
}

#[test]
fn criterion_2_golden_2x4_box() {
    let mut c = Criterion::start(2, "closed form on the 2x4 box", 5.0);
    let mut rng = RngStream::from_seed(0xACC_2).rng();
    for _ in 0..8 {
        let a_sq: Vec<BigRational> = (0..2).map(|_| random_rational_sq(&mut rng)).collect();
        let b_sq: Vec<BigRational> = (0..4).map(|_| random_rational_sq(&mut rng)).collect();
        let coeffs = j_exact_rational(&a_sq, &b_sq).unwrap();
        c.check(coeffs.len() == 9, || "wrong degree".into());
        for j in [1usize, 2, 3, 5, 6, 7] {
            c.check(coeffs[j].is_zero(), || format!("c{j} should vanish exactly"));
        }
        let det_b_sq: BigRational = b_sq.iter().product();
        let det_a_sq: BigRational = a_sq.iter().product();
        let want_c8 = &det_b_sq / (&det_a_sq * &det_a_sq);
        c.check(coeffs[8] == want_c8, || format!("c8 = {} vs {}", coeffs[8], want_c8));
        let e2: BigRational = (0..4)
            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
            .map(|(i, j)| &b_sq[i] * &b_sq[j])
            .sum();
        let want_c4 = e2 / (rational(6, 1) * &det_a_sq);
        c.check(coeffs[4] == want_c4, || format!("c4 = {} vs {}", coeffs[4], want_c4));

        // Float route within 1e-10.
        let to_sqrt = |v: &[BigRational]| -> Vec<f64> {
            v.iter().map(|x| x.to_f64().unwrap().sqrt()).collect()
        };
        let float = j_exact(&Matrix::diagonal(&to_sqrt(&a_sq)), &Matrix::diagonal(&to_sqrt(&b_sq))).unwrap();
        for (j, want) in [(4usize, &want_c4), (8usize, &want_c8)] {
            let gap = (float.coeffs[j] - want.to_f64().unwrap()).abs();
            c.check(gap <= 1e-10, || format!("float c{j} off by {gap:.2e}"));
        }
    }
    c.finish("c2 = c6 = 0 exactly, c4 and c8 match the closed forms");
}

#[test]
fn criterion_3_series_at_one_is_bounded_below() {
    let mut c = Criterion::start(3, "series value at one stays above 1", 120.0);
    let mut rng = RngStream::from_seed(0xACC_3).rng();
    let boxes: Vec<(usize, usize)> = (1..=3).flat_map(|k| (1..=3).map(move |nk| (k, nk))).collect();
    for i in 0..200usize {
        let (k, nk) = boxes[i % boxes.len()];
        let a: Vec<f64> = (0..k).map(|_| log_uniform(0.1, 10.0, &mut rng)).collect();
        let b: Vec<f64> = (0..nk).map(|_| log_uniform(0.1, 10.0, &mut rng)).collect();
        let b1 = Matrix::diagonal(&a);
        let b2 = Matrix::diagonal(&b);
        let series = j_exact(&b1, &b2).unwrap();
        for (j, &cj) in series.coeffs.iter().enumerate() {
            c.check(cj >= 0.0, || format!("c{j} = {cj} negative (box {k}x{nk})"));
            if j % 4 != 0 {
                c.check(cj == 0.0, || format!("c{j} = {cj} should vanish (box {k}x{nk})"));
            }
        }
        let gate = j_at_one_check(&b1, &b2).unwrap();
        c.check(gate.pass, || {
            format!("value at one {} below threshold (box {k}x{nk}, a={a:?}, b={b:?})", gate.value)
        });
    }
    c.finish("200 instances over all boxes up to 3x3, coefficients nonnegative and 4-periodic");
}

#[test]
fn criterion_4_group_average_two_paths() {
    let mut c = Criterion::start(4, "exact vs Monte Carlo group average", 600.0);
    let entries = [0.5, 1.0, 2.0, 3.0];
    let base = RngStream::from_seed(0xACC_4);
    let mut point = 0u64;
    let mut grid = 0usize;
    for n in 1..=4usize {
        let m = Matrix::diagonal(&entries[..n]);
        for w in [2u32, 4, 6, 8] {
            for half in partitions_of(w / 2, n) {
                if half.is_empty() {
                    continue;
                }
                let mu = half.doubled();
                let exact = f_mu(&mu, &m).unwrap();
                let est =
                    f_mu_mc(&mu, &m, 100_000, base.substream(point * STREAM_BLOCK), 4).unwrap();
                point += 1;
                grid += 1;
                let gap = (est.mean - exact).abs();
                // Constant integrands (determinant powers) leave stderr at the
                // round-off floor, so allow machine-precision slack on top.
                let tol = 3.0 * est.stderr + 1e-12 * (1.0 + exact.abs());
                c.check(gap <= tol, || {
                    format!("label [{mu}] at n={n}: mc {} +- {} vs exact {exact}", est.mean, est.stderr)
                });
            }
        }
    }
    c.check(grid == 33, || format!("expected 33 grid points, ran {grid}"));
    c.finish("33 grid points, 1e5 samples each, all within 3 sigma");
}

#[test]
fn criterion_5_series_two_paths() {
    let mut c = Criterion::start(5, "exact vs Monte Carlo series values", 600.0);
    let base = RngStream::from_seed(0xACC_5);
    let mut rng = RngStream::from_seed(0xACC_50).rng();
    let us = [0.5, 1.0, 2.0];
    let mut pair_idx = 0u64;
    for k in 1..=3usize {
        for nk in 1..=3usize {
            for _ in 0..20 {
                let a: Vec<f64> = (0..k).map(|_| log_uniform(0.5, 2.0, &mut rng)).collect();
                let b: Vec<f64> = (0..nk).map(|_| log_uniform(0.5, 2.0, &mut rng)).collect();
                let b1 = Matrix::diagonal(&a);
                let b2 = Matrix::diagonal(&b);
                let series = j_exact(&b1, &b2).unwrap();
                let ests =
                    j_mc_multi(&b1, &b2, &us, 100_000, base.substream(pair_idx * STREAM_BLOCK), 4)
                        .unwrap();
                pair_idx += 1;
                for (u, est) in us.iter().zip(&ests) {
                    let exact = series.eval(*u);
                    let gap = (est.mean - exact).abs();
                    let tol = 3.0 * est.stderr + 1e-12 * (1.0 + exact.abs());
                    c.check(gap <= tol, || {
                        format!(
                            "box {k}x{nk} at u={u}: mc {} +- {} vs exact {} (a={a:?}, b={b:?})",
                            est.mean,
                            est.stderr,
                            series.eval(*u)
                        )
                    });
                }
            }
        }
    }
    c.finish("180 pairs x 3 evaluation points, 1e5 shared samples each");
}

#[test]
fn criterion_6_jack_kernel_exact() {
    let mut c = Criterion::start(6, "Jack kernel exact properties", 60.0);
    let alpha = rational(2, 1);
    // Dominance triangularity with unit leading coefficient.
    for weight in 1..=6u32 {
        for lambda in partitions_of(weight, weight as usize) {
            let p = jack_in_monomials(&lambda, &alpha, weight as usize).unwrap();
            c.check(p.coeff(&lambda).is_one(), || format!("leading coeff of [{lambda}]"));
            for mu in p.coeffs().keys() {
                c.check(lambda.dominates(mu), || format!("[{mu}] not below [{lambda}]"));
            }
        }
    }
    // Pairwise orthogonality under the alpha = 2 Hall pairing, exact.
    for weight in 1..=6u32 {
        let labels = partitions_of(weight, weight as usize);
        let expansions: Vec<_> = labels
            .iter()
            .map(|l| m_to_power_sums(&jack_in_monomials(l, &alpha, weight as usize).unwrap()))
            .collect();
        for i in 0..labels.len() {
            for j in (i + 1)..labels.len() {
                let mut acc = BigRational::zero();
                for (kappa, ci) in &expansions[i] {
                    if let Some(cj) = expansions[j].get(kappa) {
                        let mut term = ci * cj * BigRational::from(z_lambda(kappa));
                        for _ in 0..kappa.len() {
                            term *= &alpha;
                        }
                        acc += term;
                    }
                }
                c.check(acc.is_zero(), || {
                    format!("[{}] and [{}] pair to {acc}", labels[i], labels[j])
                });
            }
        }
    }
    // Principal-specialization regression, exact rational equality.
    for nvars in 1..=5usize {
        for weight in 1..=6u32 {
            for lambda in partitions_of(weight, nvars) {
                let direct = jack_in_monomials(&lambda, &alpha, nvars).unwrap().eval_at_ones();
                let formula = principal_specialization(&lambda, &alpha, nvars);
                c.check(direct == formula, || {
                    format!("[{lambda}] at N={nvars}: {direct} vs {formula}")
                });
            }
        }
    }
    c.finish("triangularity, orthogonality, and specialization all exact through weight 6");
}

#[test]
fn criterion_7_point_mass_spectrum() {
    let mut c = Criterion::start(7, "point-mass spectrum identity", 1.0);
    let model = MeasureModel::point_mass(Matrix::diagonal(&[2.0, 1.0, 0.5])).unwrap();
    let est = lyapunov_spectrum_qr(&model, 10_000, RngStream::from_seed(0xACC_7)).unwrap();
    let expected = [2.0f64.ln(), 0.0, -(2.0f64.ln())];
    for (i, (r, want)) in est.exponents.iter().zip(expected).enumerate() {
        c.check((r - want).abs() <= 1e-4, || format!("exponent {i}: {r} vs {want}"));
    }
    c.finish("exponents within 1e-4 of (log 2, 0, -log 2) at 1e4 steps");
}

#[test]
fn criterion_8_estimator_consistency() {
    let mut c = Criterion::start(8, "cocycle vs subspace estimators", 60.0);
    let model = MeasureModel::left_haar_orbit(Matrix::diagonal(&[3.0, 1.0, 1.0 / 3.0])).unwrap();
    let qr = lyapunov_spectrum_qr(&model, 100_000, RngStream::from_seed(0xACC_8)).unwrap();
    for k in 1..=2usize {
        let mc = topk_sum_grassmann(
            &model,
            k,
            100_000,
            RngStream::from_seed(0xACC_80 + k as u64),
            4,
        )
        .unwrap();
        let combined = (qr.sum_top_stderr(k).powi(2) + mc.stderr.powi(2)).sqrt();
        let gap = (qr.sum_top(k) - mc.mean).abs();
        c.check(gap <= 3.0 * combined, || {
            format!(
                "k={k}: cocycle {} vs subspace {} (gap {gap:.2e}, 3 sigma {:.2e})",
                qr.sum_top(k),
                mc.mean,
                3.0 * combined
            )
        });
    }
    c.finish("partial sums agree within combined 3 sigma at 1e5 steps and samples");
}

#[test]
fn criterion_9_main_inequality_campaign() {
    let mut c = Criterion::start(9, "Haar-measure averaging inequality campaign", 600.0);
    let mut model_rng = RngStream::from_seed(0xACC_90).rng();
    let base = RngStream::from_seed(0xACC_9);
    let dims = [2usize, 3, 4, 2, 3, 4, 2, 3, 4, 3];
    let mut pair = 0u64;
    let mut pointwise_total = 0u64;
    for (mi, &n) in dims.iter().enumerate() {
        let svals: Vec<f64> = (0..n).map(|_| log_uniform(0.4, 2.5, &mut model_rng)).collect();
        let model = if mi % 2 == 0 {
            let u = glyap_core::linalg::haar_orthogonal(n, &mut model_rng);
            let v = glyap_core::linalg::haar_orthogonal(n, &mut model_rng);
            let a0 = u.mul(&Matrix::diagonal(&svals)).mul(&v.transpose());
            MeasureModel::left_haar_orbit(a0).unwrap()
        } else {
            MeasureModel::two_sided_haar_orbit(&svals).unwrap()
        };
        for k in 1..=n {
            let report = verify_main_inequality(
                &model,
                k,
                20_000,
                400,
                base.substream(pair * 4 * STREAM_BLOCK),
                4,
            )
            .unwrap();
            pair += 1;
            pointwise_total += report.pointwise_checked;
            c.check(report.within_noise(3.0), || {
                format!(
                    "model {mi} (n={n}), k={k}: margin {:.4e} below -3 sigma ({:.4e})",
                    report.margin, report.margin_sigma
                )
            });
            c.check(report.sup_lhs.rejection_rate() < 1e-3, || {
                format!("model {mi}, k={k}: rejection rate {}", report.sup_lhs.rejection_rate())
            });
            c.check(report.pointwise_violations == 0, || {
                format!("model {mi}, k={k}: {} pointwise violations", report.pointwise_violations)
            });
        }
    }
    c.check(pointwise_total >= 10_000, || {
        format!("only {pointwise_total} pointwise samples checked")
    });
    c.finish("10 models, every k, margins within noise and 1.2e4 exact pointwise checks");
}
