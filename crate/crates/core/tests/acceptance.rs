//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed. The
//! process fails when a criterion fails, except for the documented
//! unattainable sub-check of criterion 5 (see `criterion_5`).

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalewave::comparison::{comparison_blowup_z, reduce_solution, verify_fundamental_inequality, ComparisonFrame};
use scalewave::experiments::{run_sweep, DataConfig, GridConfig, Model, ModelParams, SweepConfig};
use scalewave::fd::{solve_semilinear_field, Forcing, DEFAULT_THRESHOLD};
use scalewave::field::GridSpec;
use scalewave::hypergeometric::hyp2f1_default;
use scalewave::iteration::{
    critical_sequences, cusp_sequences, slicing_level, subcritical_sequences, weighted_power_sum_closed, FrameConstants,
    IterationInput,
};
use scalewave::kernels::{domain_sample, kernel_e, kernel_k0_k1, verify_kernel_lower_bounds, BoundReport, KernelPoint};
use scalewave::linear::solve_linear_point;
use scalewave::params::{classify_sigmas, cusp_exponents, cusp_rate, glassey, lambda_curve, ScaleInvariantParams};
use scalewave::profile::{Bump, BumpFamily, CauchyProfile, SourceTerm};

use common::*;

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum Status {
    Pass,
    Fail,
    /// Fails for a reason analysed in the notes; does not fail the process.
    KnownFail,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn params(mu: f64, nu2: f64) -> ScaleInvariantParams {
    ScaleInvariantParams::new(mu, nu2).unwrap()
}

fn cone_points(rng: &mut ChaCha8Rng, n: usize, t_max: f64, radius: f64) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| {
            let t = rng.gen_range(0.0..t_max);
            let x = rng.gen_range(-(radius + t)..(radius + t));
            (t, x)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let oracle = DerivativeData::standard();
    let data = oracle.profile(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut err = 0.0f64;
    for (t, x) in cone_points(&mut rng, 200, 4.0, oracle.radius) {
        let u = solve_linear_point(&params(0.0, 0.0), &data, &SourceTerm::zero(), t, x, 1e-9).unwrap();
        err = err.max((u - oracle.free_wave(t, x)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(err <= 1e-8 && secs <= 10.0, format!("max |err| = {err:.3e} (<= 1e-8), {secs:.2} s (<= 10 s)"))
}

fn criterion_2() -> Outcome {
    let oracle = DerivativeData::standard();
    let data = oracle.profile(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut err = 0.0f64;
    for (t, x) in cone_points(&mut rng, 200, 4.0, oracle.radius) {
        let u = solve_linear_point(&params(2.0, 0.0), &data, &SourceTerm::zero(), t, x, 1e-9).unwrap();
        err = err.max(((1.0 + t) * u - oracle.free_wave_shifted(t, x)).abs());
    }
    outcome(err <= 1e-8, format!("max |(1+t)u - w| = {err:.3e} (<= 1e-8)"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let p = params(1.0, 0.0);
    let bump = Bump::smooth(1.0).unwrap();
    let src = SourceTerm::bump_cos(bump);
    let data = CauchyProfile::zero(1.0).unwrap();
    let t_end = 1.5;
    // Nodes x = k/10 inside the cone, shared by all three grids.
    let xs: Vec<f64> = (-25..=25).map(|k| k as f64 / 10.0).collect();
    let reference: Vec<f64> = xs
        .iter()
        .map(|&x| solve_linear_point(&p, &data, &src, t_end, x, 1e-11).unwrap())
        .collect();
    let mut errs = Vec::new();
    for dx in [0.1, 0.05, 0.025] {
        let grid = GridSpec::new(dx, 0.5, 3.0, t_end).unwrap();
        let (field, _) = solve_semilinear_field(&p, &data, &Forcing::Source(src.clone()), &grid, usize::MAX).unwrap();
        let k = field.times.len() - 1;
        assert!((field.times[k] - t_end).abs() < 1e-9, "last level at {}", field.times[k]);
        let err = xs
            .iter()
            .zip(&reference)
            .map(|(&x, &r)| {
                let i = ((x + 3.0) / dx).round() as usize;
                (field.values[k][i] - r).abs()
            })
            .fold(0.0f64, f64::max);
        errs.push(err);
    }
    let r1 = errs[0] / errs[1];
    let r2 = errs[1] / errs[2];
    let secs = start.elapsed().as_secs_f64();
    let ok = (3.6..=4.4).contains(&r1) && (3.6..=4.4).contains(&r2) && secs <= 60.0;
    outcome(
        ok,
        format!(
            "errors {:.3e}, {:.3e}, {:.3e}; ratios {r1:.3}, {r2:.3} (in [3.6, 4.4]); {secs:.1} s (<= 60 s)",
            errs[0], errs[1], errs[2]
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut at_zero = true;
    for (a, b, c) in [(0.5, 0.5, 1.0), (-1.3, 2.2, 2.0), (3.0, -0.25, 1.5), (0.0, 1.0, 1.0)] {
        at_zero &= hyp2f1_default(a, b, c, 0.0).unwrap() == 1.0;
    }
    let mut geo = 0.0f64;
    for k in 1..=9 {
        let z = k as f64 / 10.0;
        geo = geo.max((hyp2f1_default(1.0, 1.0, 1.0, z).unwrap() - 1.0 / (1.0 - z)).abs());
    }
    let mut min_equal = f64::INFINITY;
    for ia in 0..=40 {
        let a = -2.0 + 0.1 * ia as f64;
        for c in [1.0, 2.0] {
            for iz in 0..=99 {
                let z = 0.01 * iz as f64;
                min_equal = min_equal.min(hyp2f1_default(a, a, c, z).unwrap());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut symmetric = true;
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let c = [1.0, 2.0][rng.gen_range(0..2)];
        let z = rng.gen_range(0.0..0.95);
        symmetric &= hyp2f1_default(a, b, c, z).unwrap().to_bits() == hyp2f1_default(b, a, c, z).unwrap().to_bits();
    }
    let ok = at_zero && geo <= 1e-12 && min_equal >= 1.0 - 1e-13 && symmetric;
    outcome(
        ok,
        format!(
            "F(.,.;.;0)=1: {at_zero}; max |F(1,1;1;z) - 1/(1-z)| = {geo:.3e}; min F(a,a;c;z) = {min_equal:.17}; symmetric: {symmetric}"
        ),
    )
}

/// Kernel sample shared by criteria 5 and 10.
fn kernel_sample() -> Vec<KernelPoint> {
    domain_sample(20.0, 50, 50, 50).unwrap()
}

/// The mixed constant at `(μ, ν²) = (0, 0)` cannot be positive: with μ = 0
/// and δ = 1 the kernel `E` is identically 1, so `K0 = 0` and `K0 + μK1 = 0`.
/// That sub-check is printed as FAIL and marked as known.
fn criterion_5(sample: &[KernelPoint]) -> (Outcome, BoundReport) {
    let mut details = Vec::new();
    let mut ok = true;
    let mut only_known = true;
    let mut mu2 = None;
    for (mu, nu2) in [(0.0, 0.0), (2.0, 0.0), (3.0, 0.0), (1.0, 0.0), (5.0, 4.0)] {
        let p = params(mu, nu2);
        let rep = verify_kernel_lower_bounds(&p, sample).unwrap();
        let base = rep.min_e > 0.0 && rep.k1_positive() && rep.e_positive();
        let mix = rep.mix_positive().unwrap_or(true);
        if !base {
            only_known = false;
        }
        if !mix && !(mu == 0.0 && nu2 == 0.0 && rep.c_mix == Some(0.0)) {
            only_known = false;
        }
        ok &= base && mix;
        details.push(format!(
            "({mu},{nu2}): c_K1={:.3e} c_E={:.3e} c_mix={}",
            rep.c_k1,
            rep.c_e,
            rep.c_mix.map_or("n/a".into(), |m| format!("{m:.3e}"))
        ));
        if mu == 2.0 {
            mu2 = Some(rep);
        }
    }
    let mu2 = mu2.unwrap();
    let unit = mu2.c_k1 == 1.0 && mu2.c_e == 1.0;
    ok &= unit;
    only_known &= unit;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fd_err = 0.0f64;
    let h = 1e-4;
    let sets = [(0.0, 0.0), (2.0, 0.0), (3.0, 0.0), (1.0, 0.0), (5.0, 4.0)];
    for _ in 0..100 {
        let (mu, nu2) = sets[rng.gen_range(0..sets.len())];
        let p = params(mu, nu2);
        let t = rng.gen_range(0.1..20.0);
        let y = rng.gen_range(-0.9 * t..0.9 * t);
        let e = |b: f64| kernel_e(&p, &KernelPoint::new(t, 0.0, b, y).unwrap()).unwrap();
        let fd = -(-3.0 * e(0.0) + 4.0 * e(h) - e(2.0 * h)) / (2.0 * h);
        fd_err = fd_err.max((fd - kernel_k0_k1(&p, t, 0.0, y).unwrap().k0).abs());
    }
    ok &= fd_err <= 1e-7;
    only_known &= fd_err <= 1e-7;
    let detail = format!(
        "{}; mu=2 unit constants: {unit}; K0 vs difference max {fd_err:.3e} (<= 1e-7)",
        details.join(", ")
    );
    let status = if ok {
        Status::Pass
    } else if only_known {
        Status::KnownFail
    } else {
        Status::Fail
    };
    (Outcome { status, detail }, mu2)
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut err = 0.0f64;
    for p in [1.5, 2.0, 3.0] {
        for q in [1.5, 2.0, 3.0] {
            for s1 in [0.0, 1.0, 2.0] {
                for s2 in [0.0, 1.0, 2.0] {
                    let input = IterationInput {
                        n: 1,
                        sigma1: s1,
                        sigma2: s2,
                        p,
                        q,
                        constants: FrameConstants::default(),
                        eps: 0.1,
                    };
                    let sub = subcritical_sequences(&input, 25).unwrap();
                    let crit = critical_sequences(&input, 25).unwrap();
                    let cusp = cusp_sequences(&input, 25).unwrap();
                    err = err
                        .max(sub.alpha_discrepancy)
                        .max(sub.beta_discrepancy)
                        .max(crit.theta_discrepancy)
                        .max(cusp.rho_discrepancy);
                    // Exact rational recursions as a second oracle.
                    let pq = rational(p) * rational(q);
                    let exact_beta = exact_affine(&rational(sub.b), &pq, 25);
                    let exact_theta = exact_affine(&rational(1.0), &pq, 25);
                    let exact_rho = exact_affine(&rational(p + 1.0), &pq, 25);
                    for j in 0..=25 {
                        err = err
                            .max(rel_err(sub.betas[j], to_f64(&exact_beta[j])))
                            .max(rel_err(crit.thetas[j], to_f64(&exact_theta[j])))
                            .max(rel_err(cusp.rhos[j], to_f64(&exact_rho[j])));
                    }
                }
            }
        }
    }
    let mut sum_err = 0.0f64;
    for m in [1.2, 2.0, 4.0] {
        for j in 0..=20 {
            let exact = to_f64(&exact_weighted_sum(&rational(m), j));
            sum_err = sum_err.max((weighted_power_sum_closed(m, j) - exact).abs() / exact.abs().max(1.0));
        }
    }
    let mut slicing = true;
    for j in 0..=40usize {
        let (l, l1) = (slicing_level(j), slicing_level(j + 1));
        slicing &= l < 2.0 && l < l1 && 2.0 * l > l1 && 1.0 - l / l1 >= 0.5f64.powi(j as i32 + 3);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        err <= 1e-12 && sum_err <= 1e-12 && slicing && secs <= 5.0,
        format!("closed forms {err:.3e}, summation {sum_err:.3e} (<= 1e-12), slicing: {slicing}, {secs:.2} s (<= 5 s)"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = rng.gen_range(1.5..3.0);
        let a = rng.gen_range(0.0..=1.0);
        let dim = 1.0 + 2.0 * a / (p - 1.0);
        let (m, c, r, eps) = (
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..1.0),
        );
        let frame = ComparisonFrame::new(m, c, p, dim, r).unwrap();
        let z = comparison_blowup_z(&frame, eps).unwrap().z().unwrap();
        let z_ode = ode_blowup_z(m * eps, c, frame.a, p, r);
        worst = worst.max(((z - z_ode) / z_ode).abs());
    }
    let unit = ComparisonFrame::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
    let z = comparison_blowup_z(&unit, 0.1).unwrap().z().unwrap();
    let exact = (z - unit.r - 10.0).abs();
    outcome(
        worst <= 0.01 && exact <= 1e-12,
        format!("max relative gap to ODE oracle {worst:.3e} (<= 1e-2); a=0 case z*-R-10 = {exact:.3e}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cusp_err = 0.0f64;
    let mut found = 0;
    while found < 50 {
        let n = rng.gen_range(1..=4u32);
        let (s1, s2) = (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0));
        if n as f64 + s1 <= 1.0 || n as f64 + s2 <= 1.0 {
            continue;
        }
        let cusp = cusp_exponents(n, s1, s2).unwrap();
        if !cusp.admissible {
            continue;
        }
        found += 1;
        let rep = classify_sigmas(n, s1, s2, cusp.p, cusp.q, 1e-12).unwrap();
        cusp_err = cusp_err.max(rep.lambda1.abs()).max(rep.lambda2.abs());
    }
    let mut gla_err = 0.0f64;
    for d in 2..=10 {
        let p = glassey(d as f64).unwrap();
        gla_err = gla_err.max(lambda_curve(d as f64, p, p).unwrap().abs());
    }
    let mut exact = true;
    for n in 1..=4u32 {
        for s in [0.5, 1.0, 2.0, 3.0] {
            let cusp = cusp_exponents(n, s, s).unwrap();
            exact &= cusp_rate(cusp.p, cusp.q, s, s) == glassey(n as f64 + s).unwrap() - 1.0;
        }
    }
    outcome(
        cusp_err <= 1e-12 && gla_err <= 1e-12 && exact,
        format!("cusp |Lambda| max {cusp_err:.3e}; Glassey |Lambda| max {gla_err:.3e}; cusp rate exact: {exact}"),
    )
}

const SWEEP_EPS: [f64; 6] = [2.0, 1.0, 0.5, 0.25, 0.125, 0.0625];
const SWEEP_DX: f64 = 1.0 / 200.0;

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let cfg = SweepConfig {
        model: Model::Single,
        params: ModelParams::Single(params(2.0, 0.0)),
        n: 1,
        p: 1.5,
        q: None,
        data: DataConfig {
            family: BumpFamily::Smooth,
            radius: 1.0,
        },
        eps_grid: SWEEP_EPS.to_vec(),
        grid: GridConfig {
            dx: SWEEP_DX,
            cfl: 0.5,
            t_max: 200.0,
        },
        threshold: DEFAULT_THRESHOLD,
        refine: true,
        output_path: None,
    };
    let report = run_sweep(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let decades = (SWEEP_EPS[0] / SWEEP_EPS[SWEEP_EPS.len() - 1]).log10();
    let converged_blow_up = report.records.iter().filter(|r| r.converged).all(|r| r.blow_up);
    let monotone = report.monotonicity_violations.is_empty();
    let (slope_ok, upper_ok, fit_text) = match (&report.fit, &report.upper_bound) {
        (Some(fit), Some(ub)) => (
            fit.within_band(),
            // T grows no faster than ε^{−1}: slope not below −1 beyond the band.
            fit.slope >= fit.predicted_slope * (1.0 + fit.pass_band) && ub.constant.is_finite(),
            format!(
                "slope {:.4} vs predicted {:.1} (±20% band: {}), r2 {:.4}, points {}, T <= {:.3} eps^-1",
                fit.slope,
                fit.predicted_slope,
                fit.within_band(),
                fit.r2,
                fit.points,
                ub.constant
            ),
        ),
        _ => (false, false, "no fit".into()),
    };
    let ts: Vec<String> = report
        .records
        .iter()
        .map(|r| format!("{}:{:.3}{}", r.eps, r.t_est, if r.converged { "" } else { "(unconverged)" }))
        .collect();
    let ok = decades >= 1.5 && converged_blow_up && monotone && (slope_ok || upper_ok) && secs <= 600.0;
    outcome(
        ok,
        format!(
            "T_est [{}]; {fit_text}; all converged blow up: {converged_blow_up}; monotone: {monotone}; {decades:.2} decades; {secs:.0} s (<= 600 s)",
            ts.join(", ")
        ),
    )
}

fn criterion_10(mu2_bounds: &BoundReport) -> Outcome {
    let eps = SWEEP_EPS[0];
    let radius = 1.0;
    let p = params(2.0, 0.0);
    let data = CauchyProfile::bump_pair(BumpFamily::Smooth, radius, eps).unwrap();
    let grid = GridSpec::covering(SWEEP_DX, 0.5, radius, 20.0).unwrap();
    let (field, out) = solve_semilinear_field(&p, &data, &Forcing::Power { p: 1.5 }, &grid, 4).unwrap();
    // Stay a few levels short of the blow-up time.
    let z_hi = field.t_end() - radius - 0.05;
    let trace = reduce_solution(&field, &p, radius, (radius, z_hi), 2000).unwrap();
    let frame = ComparisonFrame::empirical(&p, 1.5, mu2_bounds, data.l1_norm_sum().unwrap(), radius, data.u0_is_zero).unwrap();
    let rep = verify_fundamental_inequality(&trace, &frame, eps).unwrap();
    outcome(
        rep.holds_with_slack(1e-6) && !rep.partial_trace,
        format!(
            "eps={eps}, blow-up at t={:.3}, z in [{radius}, {z_hi:.3}], M={:.4}, C={:.4}, min(LHS-RHS) = {:.3e} at z={:.3} (>= -1e-6)",
            out.t_end, frame.m, frame.c, rep.min_gap, rep.argmin_z
        ),
    )
}

/// Criteria selected by `SCALEWAVE_ACCEPTANCE_ONLY` (comma separated), all by default.
fn selected() -> Vec<usize> {
    match std::env::var("SCALEWAVE_ACCEPTANCE_ONLY") {
        Ok(list) => list.split(',').filter_map(|s| s.trim().parse().ok()).collect(),
        Err(_) => (1..=10).collect(),
    }
}

fn main() -> ExitCode {
    let only = selected();
    let mut mu2 = None;
    let mut failed = false;
    for k in 1..=10 {
        if !only.contains(&k) {
            continue;
        }
        let o = match k {
            1 => criterion_1(),
            2 => criterion_2(),
            3 => criterion_3(),
            4 => criterion_4(),
            5 | 10 if mu2.is_none() => {
                let (c5, rep) = criterion_5(&kernel_sample());
                mu2 = Some((c5, rep));
                if k == 5 {
                    mu2.as_ref().map(|(c, _)| Outcome { status: c.status, detail: c.detail.clone() }).unwrap()
                } else {
                    criterion_10(&mu2.as_ref().unwrap().1)
                }
            }
            5 => unreachable!(),
            6 => criterion_6(),
            7 => criterion_7(),
            8 => criterion_8(),
            9 => criterion_9(),
            _ => criterion_10(&mu2.as_ref().unwrap().1),
        };
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::KnownFail => "FAIL (known: c_mix = 0 at mu = nu2 = 0, see README)",
        };
        println!("criterion {k:>2}: {tag}: {}", o.detail);
        failed |= o.status == Status::Fail;
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
