//! Lower-bound sequences for the weakly coupled system.
//!
//! The reduced functionals `U`, `V` on the characteristic `t − z = R` satisfy
//! the iteration frame
//!
//! ```text
//! U(z) >= Mε + C ∫_R^z (R+y)^{w_U} |V(y)|^p dy,   w_U = −(n−1)(p−1)/2 + σ1/2 − σ2 p/2,
//! V(z) >= Nε + K ∫_R^z (R+y)^{w_V} |U(y)|^q dy,   w_V = −(n−1)(q−1)/2 + σ2/2 − σ1 q/2,
//! ```
//!
//! and plugging one bound into the other produces sequences of lower bounds
//! for `U`. This module builds those sequences (subcritical, critical with
//! slicing, and cusp), checks their closed forms and bound chains, and
//! evaluates the thresholds beyond which the bounds diverge.
//!
//! Exponent sequences grow like `(pq)^j`, so they are accumulated in
//! double-double arithmetic ([`twofloat`]) and the constants are kept in
//! logarithmic form.

use std::io::Write;

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{positive, Error, Result};
use crate::params::{classify_system, cusp_rate, Regime, SystemParams, DEFAULT_CRITICAL_TOL};

/// The unspecified constants of the iteration frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameConstants {
    pub c: f64,
    pub k: f64,
    pub m: f64,
    pub n: f64,
}

impl Default for FrameConstants {
    fn default() -> Self {
        Self {
            c: 1.0,
            k: 1.0,
            m: 1.0,
            n: 1.0,
        }
    }
}

impl FrameConstants {
    fn validate(&self) -> Result<()> {
        positive("C", self.c)?;
        positive("K", self.k)?;
        positive("M", self.m)?;
        positive("N", self.n)?;
        Ok(())
    }

    /// Constants after exchanging the roles of `U` and `V`.
    pub fn swapped(&self) -> Self {
        Self {
            c: self.k,
            k: self.c,
            m: self.n,
            n: self.m,
        }
    }
}

/// Weights of the two integral inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationFrame {
    pub weight_u: f64,
    pub weight_v: f64,
    pub constants: FrameConstants,
}

pub fn build_iteration_frame(n: u32, sys: &SystemParams, constants: FrameConstants) -> Result<IterationFrame> {
    constants.validate()?;
    Ok(frame_weights(n, sys.sigma1(), sys.sigma2(), sys.p, sys.q, constants))
}

/// Frame weights from explicit shifts.
pub fn frame_weights(n: u32, sigma1: f64, sigma2: f64, p: f64, q: f64, constants: FrameConstants) -> IterationFrame {
    let nm1 = n as f64 - 1.0;
    IterationFrame {
        weight_u: -0.5 * nm1 * (p - 1.0) + 0.5 * sigma1 - 0.5 * sigma2 * p,
        weight_v: -0.5 * nm1 * (q - 1.0) + 0.5 * sigma2 - 0.5 * sigma1 * q,
        constants,
    }
}

/// The data the sequences depend on: exponents and shifts with `U` as the
/// iterated component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationInput {
    pub n: u32,
    pub sigma1: f64,
    pub sigma2: f64,
    pub p: f64,
    pub q: f64,
    pub constants: FrameConstants,
    pub eps: f64,
}

impl IterationInput {
    pub fn new(n: u32, sys: &SystemParams, constants: FrameConstants, eps: f64) -> Self {
        Self {
            n,
            sigma1: sys.sigma1(),
            sigma2: sys.sigma2(),
            p: sys.p,
            q: sys.q,
            constants,
            eps,
        }
    }

    /// Exchanges the roles of `U` and `V`.
    pub fn swapped(&self) -> Self {
        Self {
            sigma1: self.sigma2,
            sigma2: self.sigma1,
            p: self.q,
            q: self.p,
            constants: self.constants.swapped(),
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        positive("eps", self.eps)?;
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(v.is_finite() && v > 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must exceed 1",
                });
            }
        }
        if self.pq_f64() <= 1.0 {
            return Err(Error::InvalidParameter {
                name: "pq",
                value: self.pq_f64(),
                reason: "must exceed 1",
            });
        }
        Ok(())
    }

    /// `pq` as an exact double-double product.
    fn pq(&self) -> TwoFloat {
        TwoFloat::new_mul(self.p, self.q)
    }

    fn pq_f64(&self) -> f64 {
        self.p * self.q
    }

    fn regime(&self) -> Result<Regime> {
        Ok(crate::params::classify_sigmas(self.n, self.sigma1, self.sigma2, self.p, self.q, DEFAULT_CRITICAL_TOL)?.regime)
    }
}

fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

fn to_f64(x: TwoFloat) -> f64 {
    f64::from(x)
}

/// `(pq)^j` for `j = 0..=jmax`.
fn powers(pq: TwoFloat, jmax: usize) -> Vec<TwoFloat> {
    let mut out = Vec::with_capacity(jmax + 1);
    let mut cur = dd(1.0);
    for _ in 0..=jmax {
        out.push(cur);
        cur *= pq;
    }
    out
}

/// `factor · ((pq)^j − 1)/(pq − 1)` for every power.
fn closed_geometric(factor: f64, pows: &[TwoFloat], pq: TwoFloat) -> Vec<TwoFloat> {
    let denom = pq - 1.0;
    pows.iter().map(|&pw| (pw - 1.0) / denom * factor).collect()
}

/// `x_{j+1} = shift + pq x_j`, `x_0 = 0`.
fn affine_recursion(shift: f64, pq: TwoFloat, jmax: usize) -> Vec<TwoFloat> {
    let mut out = Vec::with_capacity(jmax + 1);
    let mut cur = dd(0.0);
    for _ in 0..=jmax {
        out.push(cur);
        cur = cur * pq + shift;
    }
    out
}

fn max_rel_discrepancy(a: &[TwoFloat], b: &[TwoFloat]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let diff = to_f64((x - y).abs());
            let scale = to_f64(x.abs()).max(to_f64(y.abs()));
            if scale == 0.0 {
                diff
            } else {
                diff / scale
            }
        })
        .fold(0.0, f64::max)
}

/// `Σ_{k=0}^{j−1} (j−k) x^k`, summed directly in double-double.
pub fn weighted_power_sum(x: f64, j: usize) -> f64 {
    let mut acc = dd(0.0);
    let mut pw = dd(1.0);
    for k in 0..j {
        acc += pw * ((j - k) as f64);
        pw *= x;
    }
    to_f64(acc)
}

/// Closed form `((x^{j+1} − 1)/(x − 1) − (j + 1))/(x − 1)` of [`weighted_power_sum`].
pub fn weighted_power_sum_closed(x: f64, j: usize) -> f64 {
    let xd = dd(x);
    let mut pw = dd(1.0);
    for _ in 0..=j {
        pw *= xd;
    }
    let denom = xd - 1.0;
    to_f64(((pw - 1.0) / denom - (j as f64 + 1.0)) / denom)
}

/// `max{0, x}` ceiled to an integer index.
fn ceil_index(x: f64) -> usize {
    if x.is_finite() && x > 0.0 {
        x.ceil() as usize
    } else {
        0
    }
}

/// Indices `j >= start` with `log_x[j] < bound[j]`.
fn bound_violations(log_x: &[TwoFloat], bound: &[TwoFloat], start: usize) -> Vec<usize> {
    (start..log_x.len()).filter(|&j| log_x[j] < bound[j]).collect()
}

/// Sequences of the subcritical iteration
/// `U(z) >= C_j (R+z)^{−α_j} (z−R)^{β_j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcriticalSequences {
    pub input: IterationInput,
    pub pq: f64,
    pub a: f64,
    pub b: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `log C_j` from the exact recursion.
    pub log_cs: Vec<f64>,
    /// `(pq)^j log(Ĉ ε)`.
    pub log_bounds: Vec<f64>,
    pub c_tilde: f64,
    pub c_hat: f64,
    pub j0: usize,
    /// Largest relative gap between recursion and closed form for α and β.
    pub alpha_discrepancy: f64,
    pub beta_discrepancy: f64,
    /// Indices `j >= j0` at which the bound chain fails.
    pub bound_violations: Vec<usize>,
    /// False when the parameters are not on the branch the sequences model.
    pub regime_matches: bool,
}

pub fn subcritical_sequences(input: &IterationInput, jmax: usize) -> Result<SubcriticalSequences> {
    input.validate()?;
    let IterationInput {
        n,
        sigma1,
        sigma2,
        p,
        q,
        constants,
        eps,
    } = *input;
    let pq = input.pq();
    let pq_f = to_f64(pq);
    let a = 0.5 * (n as f64 + sigma1 - 1.0) * (pq_f - 1.0) + 0.5 * sigma2 * p + 0.5 * sigma1;
    let b = 0.5 * sigma2 * p + 0.5 * sigma1 + p + 1.0;

    let pows = powers(pq, jmax);
    let alphas_rec = affine_recursion(a, pq, jmax);
    let betas_rec = affine_recursion(b, pq, jmax);
    let alphas_closed = closed_geometric(a, &pows, pq);
    let betas_closed = closed_geometric(b, &pows, pq);

    let log_ck = constants.c.ln() + p * constants.k.ln();
    let mut log_cs = Vec::with_capacity(jmax + 1);
    let mut cur = dd((constants.m * eps).ln());
    for beta in betas_rec.iter().take(jmax + 1) {
        log_cs.push(cur);
        let beta = to_f64(*beta);
        let step = log_ck - p * (0.5 * sigma2 + 1.0 + q * beta).ln() - (b + pq_f * beta).ln();
        cur = cur * pq + step;
    }

    let log_pq_p1 = (p + 1.0) * pq_f.ln();
    let log_c_tilde = log_ck - (p + 1.0) * (b / (pq_f - 1.0)).ln();
    let log_c_hat = constants.m.ln() - pq_f * log_pq_p1 / ((pq_f - 1.0) * (pq_f - 1.0)) + log_c_tilde / (pq_f - 1.0);
    let j0 = ceil_index(log_c_tilde / log_pq_p1 - pq_f / (pq_f - 1.0));
    let base = log_c_hat + eps.ln();
    let log_bounds: Vec<TwoFloat> = pows.iter().map(|&pw| pw * base).collect();

    let regime = input.regime()?;
    Ok(SubcriticalSequences {
        input: *input,
        pq: pq_f,
        a,
        b,
        alpha_discrepancy: max_rel_discrepancy(&alphas_rec, &alphas_closed),
        beta_discrepancy: max_rel_discrepancy(&betas_rec, &betas_closed),
        bound_violations: bound_violations(&log_cs, &log_bounds, j0),
        alphas: alphas_rec.into_iter().map(to_f64).collect(),
        betas: betas_rec.into_iter().map(to_f64).collect(),
        log_cs: log_cs.into_iter().map(to_f64).collect(),
        log_bounds: log_bounds.into_iter().map(to_f64).collect(),
        c_tilde: log_c_tilde.exp(),
        c_hat: log_c_hat.exp(),
        j0,
        regime_matches: regime == Regime::Subcritical && lambda1(input)? > 0.0,
    })
}

fn lambda1(input: &IterationInput) -> Result<f64> {
    crate::params::lambda_curve(input.n as f64 + input.sigma1, input.p, input.q)
}

/// `ℓ_j = 2 − 2^{−(j+1)}`.
pub fn slicing_level(j: usize) -> f64 {
    2.0 - 0.5f64.powi(j as i32 + 1)
}

/// Sequences of the critical iteration with slicing,
/// `U(z) >= D_j (log(z/(ℓ_j R)))^{θ_j}` for `z >= ℓ_j R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSequences {
    pub input: IterationInput,
    pub pq: f64,
    pub ells: Vec<f64>,
    pub thetas: Vec<f64>,
    pub log_ds: Vec<f64>,
    pub log_bounds: Vec<f64>,
    pub d_tilde: f64,
    pub d_hat: f64,
    pub j1: usize,
    pub theta_discrepancy: f64,
    pub bound_violations: Vec<usize>,
    pub regime_matches: bool,
}

pub fn critical_sequences(input: &IterationInput, jmax: usize) -> Result<CriticalSequences> {
    input.validate()?;
    let IterationInput {
        sigma2,
        p,
        constants,
        eps,
        ..
    } = *input;
    let pq = input.pq();
    let pq_f = to_f64(pq);
    let pows = powers(pq, jmax);
    let thetas_rec = affine_recursion(1.0, pq, jmax);
    let thetas_closed = closed_geometric(1.0, &pows, pq);

    let log_ck = constants.c.ln() + p * constants.k.ln();
    let ln2 = std::f64::consts::LN_2;
    let fixed = ((4.0 + 0.5 * sigma2) * p + 1.0) * ln2;
    let mut log_ds = Vec::with_capacity(jmax + 1);
    let mut cur = dd((constants.m * eps).ln());
    for (j, theta) in thetas_rec.iter().enumerate() {
        log_ds.push(cur);
        // D_{j+1} = C K^p 2^{−jp−((4+σ2/2)p+1)} (pq θ_j + 1)^{−1} D_j^{pq}
        let step = log_ck - (j as f64 * p) * ln2 - fixed - (pq_f * to_f64(*theta) + 1.0).ln();
        cur = cur * pq + step;
    }

    let log_d_tilde = -fixed + log_ck + (pq_f - 1.0).ln();
    let log_l = p * ln2 + pq_f.ln();
    let log_d_hat = constants.m.ln() - pq_f * log_l / ((pq_f - 1.0) * (pq_f - 1.0)) + log_d_tilde / (pq_f - 1.0);
    let j1 = ceil_index(log_d_tilde / log_l - pq_f / (pq_f - 1.0));
    let base = log_d_hat + eps.ln();
    let log_bounds: Vec<TwoFloat> = pows.iter().map(|&pw| pw * base).collect();

    let regime = input.regime()?;
    Ok(CriticalSequences {
        input: *input,
        pq: pq_f,
        ells: (0..=jmax).map(slicing_level).collect(),
        theta_discrepancy: max_rel_discrepancy(&thetas_rec, &thetas_closed),
        bound_violations: bound_violations(&log_ds, &log_bounds, j1),
        thetas: thetas_rec.into_iter().map(to_f64).collect(),
        log_ds: log_ds.into_iter().map(to_f64).collect(),
        log_bounds: log_bounds.into_iter().map(to_f64).collect(),
        d_tilde: log_d_tilde.exp(),
        d_hat: log_d_hat.exp(),
        j1,
        regime_matches: regime == Regime::CriticalBranch1,
    })
}

/// Sequences at the cusp, `U(z) >= E_j (log(z/R))^{ρ_j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspSequences {
    pub input: IterationInput,
    pub pq: f64,
    pub rhos: Vec<f64>,
    pub log_es: Vec<f64>,
    pub log_bounds: Vec<f64>,
    pub e_tilde: f64,
    pub e_hat: f64,
    pub j2: usize,
    pub rho_discrepancy: f64,
    pub bound_violations: Vec<usize>,
    pub regime_matches: bool,
}

pub fn cusp_sequences(input: &IterationInput, jmax: usize) -> Result<CuspSequences> {
    input.validate()?;
    let IterationInput {
        p, q, constants, eps, ..
    } = *input;
    let pq = input.pq();
    let pq_f = to_f64(pq);
    let pows = powers(pq, jmax);
    let rhos_rec = affine_recursion(p + 1.0, pq, jmax);
    let rhos_closed = closed_geometric(p + 1.0, &pows, pq);

    let ln2 = std::f64::consts::LN_2;
    let log_ck = constants.c.ln() + p * constants.k.ln();
    let mut log_es = Vec::with_capacity(jmax + 1);
    let mut cur = dd((constants.m * eps).ln());
    for rho in &rhos_rec {
        log_es.push(cur);
        let rho = to_f64(*rho);
        // E_{j+1} = 2^{−(p+1)} C K^p (qρ_j + 1)^{−p} (pqρ_j + p + 1)^{−1} E_j^{pq}
        let step = -(p + 1.0) * ln2 + log_ck - p * (q * rho + 1.0).ln() - (pq_f * rho + p + 1.0).ln();
        cur = cur * pq + step;
    }

    let log_pq_p1 = (p + 1.0) * pq_f.ln();
    let log_e_tilde = -(p + 1.0) * ln2 + log_ck - (p + 1.0) * ((p + 1.0) / (pq_f - 1.0)).ln();
    let log_e_hat = constants.m.ln() - pq_f * log_pq_p1 / ((pq_f - 1.0) * (pq_f - 1.0)) + log_e_tilde / (pq_f - 1.0);
    let j2 = ceil_index(log_e_tilde / log_pq_p1 - pq_f / (pq_f - 1.0));
    let base = log_e_hat + eps.ln();
    let log_bounds: Vec<TwoFloat> = pows.iter().map(|&pw| pw * base).collect();

    let regime = input.regime()?;
    Ok(CuspSequences {
        input: *input,
        pq: pq_f,
        rho_discrepancy: max_rel_discrepancy(&rhos_rec, &rhos_closed),
        bound_violations: bound_violations(&log_es, &log_bounds, j2),
        rhos: rhos_rec.into_iter().map(to_f64).collect(),
        log_es: log_es.into_iter().map(to_f64).collect(),
        log_bounds: log_bounds.into_iter().map(to_f64).collect(),
        e_tilde: log_e_tilde.exp(),
        e_hat: log_e_hat.exp(),
        j2,
        regime_matches: regime == Regime::Cusp,
    })
}

/// Any of the three sequence families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum IterationSequences {
    Subcritical(SubcriticalSequences),
    Critical(CriticalSequences),
    Cusp(CuspSequences),
}

impl IterationSequences {
    pub fn regime_matches(&self) -> bool {
        match self {
            IterationSequences::Subcritical(s) => s.regime_matches,
            IterationSequences::Critical(s) => s.regime_matches,
            IterationSequences::Cusp(s) => s.regime_matches,
        }
    }

    /// Writes `j,alpha,beta,logC`, `j,ell,theta,logD` or `j,rho,logE`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        match self {
            IterationSequences::Subcritical(s) => {
                writeln!(out, "j,alpha,beta,logC")?;
                for j in 0..s.alphas.len() {
                    writeln!(out, "{j},{:.16e},{:.16e},{:.16e}", s.alphas[j], s.betas[j], s.log_cs[j])?;
                }
            }
            IterationSequences::Critical(s) => {
                writeln!(out, "j,ell,theta,logD")?;
                for j in 0..s.thetas.len() {
                    writeln!(out, "{j},{:.16e},{:.16e},{:.16e}", s.ells[j], s.thetas[j], s.log_ds[j])?;
                }
            }
            IterationSequences::Cusp(s) => {
                writeln!(out, "j,rho,logE")?;
                for j in 0..s.rhos.len() {
                    writeln!(out, "{j},{:.16e},{:.16e}", s.rhos[j], s.log_es[j])?;
                }
            }
        }
        Ok(())
    }
}

/// Which variable a divergence threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdVariable {
    /// Time `t = z + R`.
    T,
    /// Position `z` on the characteristic.
    Z,
}

/// Whether the lower bounds diverge as `j → ∞` at a given point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceVerdict {
    /// Argument of the logarithm multiplying `(pq)^j`; divergence when > 1.
    pub argument: f64,
    pub diverges: bool,
    /// Point beyond which the argument exceeds 1.
    pub threshold: f64,
    /// `ln(threshold)`, finite even when the threshold overflows.
    pub log_threshold: f64,
    pub variable: ThresholdVariable,
}

/// Evaluates the divergence criterion at the point `z` of the characteristic:
///
/// - subcritical: `C̄ ε t^{Λ(n+σ1,p,q)} > 1` with `C̄ = 2^{−B/(pq−1)} Ĉ`,
///   `t = z + R`, threshold `t* = (C̄ε)^{−1/Λ}`;
/// - critical: `D̂ ε (log(z/2R))^{1/(pq−1)} > 1`, threshold
///   `z* = 2R exp((D̂ε)^{−(pq−1)})`;
/// - cusp: `Ê ε (log(z/R))^{(p+1)/(pq−1)} > 1`, threshold
///   `z* = R exp((Êε)^{−(pq−1)/(p+1)})`.
pub fn divergence_threshold(seq: &IterationSequences, z: f64, r: f64) -> Result<DivergenceVerdict> {
    positive("R", r)?;
    if !(z.is_finite() && z >= r) {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "must be finite and at least R",
        });
    }
    match seq {
        IterationSequences::Subcritical(s) => {
            let lambda = lambda1(&s.input)?;
            if lambda <= 0.0 {
                return Err(Error::Config(format!(
                    "subcritical divergence needs Lambda(n+sigma1,p,q) > 0, got {lambda}"
                )));
            }
            let c_bar = 2f64.powf(-s.b / (s.pq - 1.0)) * s.c_hat;
            let ce = c_bar * s.input.eps;
            let t = z + r;
            let argument = ce * t.powf(lambda);
            let log_threshold = -ce.ln() / lambda;
            Ok(DivergenceVerdict {
                argument,
                diverges: argument > 1.0,
                threshold: log_threshold.exp(),
                log_threshold,
                variable: ThresholdVariable::T,
            })
        }
        IterationSequences::Critical(s) => {
            let de = s.d_hat * s.input.eps;
            let log_ratio = (z / (2.0 * r)).ln();
            let argument = if log_ratio > 0.0 {
                de * log_ratio.powf(1.0 / (s.pq - 1.0))
            } else {
                0.0
            };
            let log_threshold = (2.0 * r).ln() + de.powf(-(s.pq - 1.0));
            Ok(DivergenceVerdict {
                argument,
                diverges: argument > 1.0,
                threshold: log_threshold.exp(),
                log_threshold,
                variable: ThresholdVariable::Z,
            })
        }
        IterationSequences::Cusp(s) => {
            let ee = s.e_hat * s.input.eps;
            let p = s.input.p;
            let log_ratio = (z / r).ln();
            let argument = if log_ratio > 0.0 {
                ee * log_ratio.powf((p + 1.0) / (s.pq - 1.0))
            } else {
                0.0
            };
            let log_threshold = r.ln() + ee.powf(-(s.pq - 1.0) / (p + 1.0));
            Ok(DivergenceVerdict {
                argument,
                diverges: argument > 1.0,
                threshold: log_threshold.exp(),
                log_threshold,
                variable: ThresholdVariable::Z,
            })
        }
    }
}

/// Lifespan upper bound for the system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemLifespanPrediction {
    /// `T <= C ε^{−rate}`, `rate = 1/Ω`.
    Algebraic { rate: f64 },
    /// `T <= exp(C ε^{−rate})`.
    Exponential { rate: f64 },
}

impl SystemLifespanPrediction {
    pub fn rate(&self) -> f64 {
        match *self {
            SystemLifespanPrediction::Algebraic { rate } | SystemLifespanPrediction::Exponential { rate } => rate,
        }
    }
}

/// Lifespan bound for the system: `ε^{−1/Ω}` when `Ω > 0`,
/// `exp(ε^{−(pq−1)})` on a critical branch and, at the cusp,
/// `exp(ε^{−(pq−1)/(p+1)})` if `σ1 >= σ2` (else with `q + 1`).
pub fn lifespan_rate_system(n: u32, sys: &SystemParams) -> Result<SystemLifespanPrediction> {
    let report = classify_system(n, sys, DEFAULT_CRITICAL_TOL)?;
    let pq = sys.p * sys.q;
    match report.regime {
        Regime::Subcritical => Ok(SystemLifespanPrediction::Algebraic { rate: 1.0 / report.omega }),
        Regime::CriticalBranch1 | Regime::CriticalBranch2 => Ok(SystemLifespanPrediction::Exponential { rate: pq - 1.0 }),
        Regime::Cusp => Ok(SystemLifespanPrediction::Exponential {
            rate: cusp_rate(sys.p, sys.q, sys.sigma1(), sys.sigma2()),
        }),
        Regime::Supercritical => Err(Error::NoPrediction {
            p: sys.p,
            upper: f64::NAN,
        }),
    }
}

/// Builds the sequence family that matches the regime of `sys`, swapping
/// the roles of `U` and `V` when the second branch dominates.
pub fn sequences_for_regime(n: u32, sys: &SystemParams, constants: FrameConstants, eps: f64, jmax: usize) -> Result<IterationSequences> {
    let report = classify_system(n, sys, DEFAULT_CRITICAL_TOL)?;
    let input = IterationInput::new(n, sys, constants, eps);
    match report.regime {
        Regime::Subcritical => {
            let inp = if report.lambda1 >= report.lambda2 { input } else { input.swapped() };
            Ok(IterationSequences::Subcritical(subcritical_sequences(&inp, jmax)?))
        }
        Regime::CriticalBranch1 => Ok(IterationSequences::Critical(critical_sequences(&input, jmax)?)),
        Regime::CriticalBranch2 => Ok(IterationSequences::Critical(critical_sequences(&input.swapped(), jmax)?)),
        Regime::Cusp => {
            let inp = if sys.sigma1() >= sys.sigma2() { input } else { input.swapped() };
            Ok(IterationSequences::Cusp(cusp_sequences(&inp, jmax)?))
        }
        Regime::Supercritical => Err(Error::NoPrediction {
            p: sys.p,
            upper: f64::NAN,
        }),
    }
}
