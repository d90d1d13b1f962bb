//! Named self-check suites, run by `scalewave verify`.
//!
//! Each suite evaluates a handful of identities and invariants on fixed,
//! deterministic parameter grids and reports one line per check. The
//! randomized versions live in the integration tests.

use std::fmt;
use std::str::FromStr;

use crate::comparison::{comparison_blowup_z, ComparisonBlowup, ComparisonFrame};
use crate::error::{Error, Result};
use crate::hypergeometric::{hyp2f1_default, hyp2f1_lower_bound_check};
use crate::iteration::{
    critical_sequences, cusp_sequences, slicing_level, subcritical_sequences, weighted_power_sum, weighted_power_sum_closed,
    FrameConstants, IterationInput,
};
use crate::kernels::{domain_sample, kernel_e, kernel_k0_k1, verify_kernel_lower_bounds, KernelPoint};
use crate::linear::solve_linear_point;
use crate::params::{classify_sigmas, cusp_exponents, cusp_rate, glassey, lambda_curve, ScaleInvariantParams};
use crate::profile::{Bump, CauchyProfile, SourceTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Exponents,
    Hypergeometric,
    Kernels,
    Linear,
    Sequences,
    Comparison,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Exponents,
        Suite::Hypergeometric,
        Suite::Kernels,
        Suite::Linear,
        Suite::Sequences,
        Suite::Comparison,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exponents => "exponents",
            Suite::Hypergeometric => "hypergeometric",
            Suite::Kernels => "kernels",
            Suite::Linear => "linear",
            Suite::Sequences => "sequences",
            Suite::Comparison => "comparison",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}/{}: {}", self.suite, c.name, c.detail)?;
        }
        Ok(())
    }
}

struct Collector(Vec<Check>);

impl Collector {
    /// Records `max_err <= tol`.
    fn within(&mut self, name: &str, max_err: f64, tol: f64) {
        self.0.push(Check {
            name: name.into(),
            passed: max_err <= tol,
            detail: format!("max error {max_err:.3e} (tol {tol:.0e})"),
        });
    }

    fn flag(&mut self, name: &str, passed: bool, detail: String) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let mut c = Collector(Vec::new());
    match suite {
        Suite::Exponents => exponents(&mut c)?,
        Suite::Hypergeometric => hypergeometric(&mut c)?,
        Suite::Kernels => kernels(&mut c)?,
        Suite::Linear => linear(&mut c)?,
        Suite::Sequences => sequences(&mut c)?,
        Suite::Comparison => comparison(&mut c)?,
    }
    Ok(SuiteReport { suite, checks: c.0 })
}

fn exponents(c: &mut Collector) -> Result<()> {
    let mut err = 0.0f64;
    for d in 2..=10 {
        let p = glassey(d as f64)?;
        err = err.max(lambda_curve(d as f64, p, p)?.abs());
    }
    c.within("lambda_at_glassey", err, 1e-12);

    let mut err = 0.0f64;
    let mut rate_err = 0.0f64;
    for n in 1..=3u32 {
        for s1 in [0.5, 1.0, 2.0, 3.0] {
            for s2 in [0.5, 1.0, 2.0, 3.0] {
                let cusp = cusp_exponents(n, s1, s2)?;
                if !cusp.admissible {
                    continue;
                }
                let rep = classify_sigmas(n, s1, s2, cusp.p, cusp.q, 1e-12)?;
                err = err.max(rep.lambda1.abs()).max(rep.lambda2.abs());
            }
        }
        let s = 1.0;
        let cusp = cusp_exponents(n, s, s)?;
        if cusp.admissible {
            let p_gla = glassey(n as f64 + s)?;
            rate_err = rate_err.max((cusp_rate(cusp.p, cusp.q, s, s) - (p_gla - 1.0)).abs());
        }
    }
    c.within("cusp_on_both_branches", err, 1e-12);
    c.within("cusp_rate_equal_sigmas", rate_err, 0.0);

    let p = ScaleInvariantParams::new(2.0, 0.0)?;
    c.flag("sigma_mu2", p.sigma() == 2.0, format!("sigma = {}", p.sigma()));
    Ok(())
}

fn hypergeometric(c: &mut Collector) -> Result<()> {
    let mut at_zero = true;
    for (a, b, cc) in [(0.3, -1.2, 1.0), (2.0, 2.0, 2.0), (-0.5, 0.7, 3.5)] {
        at_zero &= hyp2f1_default(a, b, cc, 0.0)? == 1.0;
    }
    c.flag("value_at_zero", at_zero, "F(a,b;c;0) == 1".into());

    let mut err = 0.0f64;
    for k in 1..=9 {
        let z = k as f64 / 10.0;
        err = err.max((hyp2f1_default(1.0, 1.0, 1.0, z)? - 1.0 / (1.0 - z)).abs());
    }
    c.within("geometric_series", err, 1e-12);

    let mut symmetric = true;
    for (a, b, cc, z) in [(0.3, -1.2, 1.0, 0.5), (1.5, 0.25, 2.0, 0.9), (-0.7, 2.0, 1.0, 0.3)] {
        symmetric &= hyp2f1_default(a, b, cc, z)?.to_bits() == hyp2f1_default(b, a, cc, z)?.to_bits();
    }
    c.flag("symmetry", symmetric, "F(a,b;c;z) == F(b,a;c;z) bitwise".into());

    let zgrid: Vec<f64> = (0..=99).map(|k| 0.99 * k as f64 / 99.0).collect();
    let mut lower = true;
    for k in 0..=8 {
        let a = -2.0 + 0.5 * k as f64;
        for cc in [1.0, 2.0] {
            lower &= hyp2f1_lower_bound_check(a, cc, &zgrid)?;
        }
    }
    c.flag("lower_bound_equal_params", lower, "F(a,a;c;z) >= 1 on the grid".into());
    Ok(())
}

fn kernels(c: &mut Collector) -> Result<()> {
    let sample = domain_sample(10.0, 10, 10, 10)?;
    for (mu, nu2) in [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (5.0, 4.0)] {
        let params = ScaleInvariantParams::new(mu, nu2)?;
        let rep = verify_kernel_lower_bounds(&params, &sample)?;
        c.flag(
            &format!("positivity_mu{mu}_nu2{nu2}"),
            rep.k1_positive() && rep.e_positive(),
            format!("c_K1 = {:.4e}, c_E = {:.4e}, min E = {:.4e}", rep.c_k1, rep.c_e, rep.min_e),
        );
    }
    let rep = verify_kernel_lower_bounds(&ScaleInvariantParams::new(2.0, 0.0)?, &sample)?;
    c.flag(
        "unit_constants_mu2",
        rep.c_k1 == 1.0 && rep.c_e == 1.0,
        format!("c_K1 = {}, c_E = {}", rep.c_k1, rep.c_e),
    );

    // K0 against a one-sided second-order difference of E in b.
    let mut err = 0.0f64;
    let h = 1e-4;
    for (mu, nu2) in [(0.5, 0.0), (1.5, 0.05), (3.0, 0.5)] {
        let params = ScaleInvariantParams::new(mu, nu2)?;
        for (t, y) in [(1.0, 0.2), (3.0, -1.0), (5.0, 2.5), (0.7, 0.0)] {
            let e = |b: f64| kernel_e(&params, &KernelPoint::new(t, 0.0, b, y)?);
            let fd = -(-3.0 * e(0.0)? + 4.0 * e(h)? - e(2.0 * h)?) / (2.0 * h);
            let an = kernel_k0_k1(&params, t, 0.0, y)?.k0;
            err = err.max((fd - an).abs());
        }
    }
    c.within("k0_against_difference", err, 1e-7);
    Ok(())
}

fn linear(c: &mut Collector) -> Result<()> {
    let free = ScaleInvariantParams::new(0.0, 0.0)?;
    let b = Bump::polynomial(4, 1.0)?;
    let data = CauchyProfile::from_bumps(Some(b), Some(b), 1.0, 1.0)?;
    let mut err = 0.0f64;
    for (t, x) in [(0.5, 0.1), (2.0, 1.5), (1.0, -0.9), (3.0, 0.0)] {
        let u = solve_linear_point(&free, &data, &SourceTerm::zero(), t, x, 1e-10)?;
        let exact = 0.5 * (b.value(x + t) + b.value(x - t)) + 0.5 * b.integral(x - t, x + t)?;
        err = err.max((u - exact).abs());
    }
    c.within("dalembert", err, 1e-8);

    // μ = 2, ν² = 0: (1+t)u solves the free wave equation with data (u0, u0 + u1).
    let damped = ScaleInvariantParams::new(2.0, 0.0)?;
    let mut err = 0.0f64;
    for (t, x) in [(0.5, 0.1), (2.0, 1.5), (1.0, -0.9), (3.0, 0.0)] {
        let u = solve_linear_point(&damped, &data, &SourceTerm::zero(), t, x, 1e-10)?;
        let w = 0.5 * (b.value(x + t) + b.value(x - t)) + b.integral(x - t, x + t)?;
        err = err.max(((1.0 + t) * u - w).abs());
    }
    c.within("transform_mu2", err, 1e-8);
    Ok(())
}

fn sequences(c: &mut Collector) -> Result<()> {
    let mut err = 0.0f64;
    for p in [1.5, 2.0, 3.0] {
        for q in [1.5, 2.0, 3.0] {
            for s in [0.0, 1.0, 2.0] {
                let input = IterationInput {
                    n: 1,
                    sigma1: s,
                    sigma2: s,
                    p,
                    q,
                    constants: FrameConstants::default(),
                    eps: 0.1,
                };
                let sub = subcritical_sequences(&input, 25)?;
                let crit = critical_sequences(&input, 25)?;
                let cusp = cusp_sequences(&input, 25)?;
                err = err
                    .max(sub.alpha_discrepancy)
                    .max(sub.beta_discrepancy)
                    .max(crit.theta_discrepancy)
                    .max(cusp.rho_discrepancy);
            }
        }
    }
    c.within("closed_forms", err, 1e-12);

    let mut err = 0.0f64;
    for x in [1.2, 2.0, 4.0] {
        for j in 0..=20 {
            let direct = weighted_power_sum(x, j);
            let closed = weighted_power_sum_closed(x, j);
            err = err.max((direct - closed).abs() / direct.abs().max(1.0));
        }
    }
    c.within("summation_identity", err, 1e-12);

    let mut ok = true;
    for j in 0..=40usize {
        let (l, l1) = (slicing_level(j), slicing_level(j + 1));
        ok &= l < 2.0 && l < l1 && 2.0 * l > l1 && 1.0 - l / l1 >= 0.5f64.powi(j as i32 + 3);
    }
    c.flag("slicing", ok, "levels increase below 2 with the stated gaps".into());
    Ok(())
}

fn comparison(c: &mut Collector) -> Result<()> {
    let frame = ComparisonFrame::new(1.0, 1.0, 2.0, 1.0, 1.0)?;
    let z = match comparison_blowup_z(&frame, 0.1)? {
        ComparisonBlowup::At { z, .. } => z,
        ComparisonBlowup::NoBlowup => f64::NAN,
    };
    c.within("unweighted_blowup", (z - frame.r - 10.0).abs(), 1e-12);

    let supercritical = ComparisonFrame::new(1.0, 1.0, 3.0, 3.0, 1.0)?;
    c.flag(
        "no_blowup_above_one",
        comparison_blowup_z(&supercritical, 0.1)? == ComparisonBlowup::NoBlowup,
        format!("a = {}", supercritical.a),
    );
    Ok(())
}
