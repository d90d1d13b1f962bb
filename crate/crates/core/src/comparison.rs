//! Reduced functional on the characteristic `t − z = R`, the fundamental
//! integral inequality
//!
//! ```text
//! U(z) >= Mε + C ∫_R^z (R+y)^{−a} |U(y)|^p dy,   a = (n+σ−1)(p−1)/2,
//! ```
//!
//! and the blow-up point of its comparison ODE `G' = C (R+z)^{−a} G^p`,
//! `G(R) = Mε`.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{nonnegative, positive, Error, Result};
use crate::field::SpacetimeField;
use crate::kernels::BoundReport;
use crate::params::{glassey, lifespan_prediction_for_dimension, LifespanPrediction, ScaleInvariantParams};

/// Relative tolerance within which `a` counts as exactly 1.
pub const CRITICAL_A_TOL: f64 = 1e-12;

/// Samples of `U(z) = (R+z)^{σ/2} u(z+R, z)` (here `n = 1`, so no transverse
/// integration is needed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedTrace {
    pub radius: f64,
    pub zs: Vec<f64>,
    pub us: Vec<f64>,
    pub sigma: f64,
    /// Some requested points fell outside the field and were dropped.
    pub partial: bool,
}

/// Samples the field along `t = z + R` at `nz` equally spaced `z` in
/// `[z_lo, z_hi]` (bilinear interpolation), dropping points the field does
/// not cover.
pub fn reduce_solution(
    field: &SpacetimeField,
    params: &ScaleInvariantParams,
    radius: f64,
    z_range: (f64, f64),
    nz: usize,
) -> Result<ReducedTrace> {
    positive("R", radius)?;
    let (lo, hi) = z_range;
    if !(lo >= radius && hi > lo) || nz < 2 {
        return Err(Error::Config(format!(
            "characteristic range [{lo}, {hi}] with {nz} points must satisfy R <= z_lo < z_hi and nz >= 2"
        )));
    }
    let half_sigma = 0.5 * params.sigma();
    let mut zs = Vec::with_capacity(nz);
    let mut us = Vec::with_capacity(nz);
    let mut partial = false;
    for k in 0..nz {
        let z = lo + (hi - lo) * k as f64 / (nz - 1) as f64;
        match field.interpolate(z + radius, z) {
            Some(u) => {
                zs.push(z);
                us.push((radius + z).powf(half_sigma) * u);
            }
            None => partial = true,
        }
    }
    Ok(ReducedTrace {
        radius,
        zs,
        us,
        sigma: params.sigma(),
        partial,
    })
}

/// Where the frame constants came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantSource {
    User,
    /// Kernel minima and the data norm.
    Empirical { c_k1: f64, c_e: f64, c_mix: Option<f64>, data_l1: f64 },
}

/// Constants of the fundamental inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonFrame {
    pub m: f64,
    pub c: f64,
    pub p: f64,
    /// Shifted dimension `n + σ`.
    pub dim: f64,
    /// `(dim − 1)(p − 1)/2`.
    pub a: f64,
    pub r: f64,
    pub source: ConstantSource,
}

impl ComparisonFrame {
    pub fn new(m: f64, c: f64, p: f64, dim: f64, r: f64) -> Result<Self> {
        nonnegative("M", m)?;
        nonnegative("C", c)?;
        positive("R", r)?;
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "must exceed 1",
            });
        }
        if !(dim.is_finite() && dim >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "n + sigma",
                value: dim,
                reason: "must be at least 1",
            });
        }
        Ok(Self {
            m,
            c,
            p,
            dim,
            a: 0.5 * (dim - 1.0) * (p - 1.0),
            r,
            source: ConstantSource::User,
        })
    }

    /// Frame with user constants for the single equation in dimension `n`.
    pub fn from_params(n: u32, params: &ScaleInvariantParams, p: f64, m: f64, c: f64, r: f64) -> Result<Self> {
        Self::new(m, c, p, n as f64 + params.sigma(), r)
    }

    /// Frame for `n = 1` with constants assembled from kernel minima and the
    /// data norm (nonnegative data assumed):
    ///
    /// ```text
    /// M = 2^{−√δ} min(c_K1, c_mix) (2R/(1+2R))^{σ/2} ‖u0+u1‖_{L¹}
    /// C = 2^{−√δ} c_E (2R)^{−σ/2} (2R)^{1−p} (2R/(1+2R))^{σ/2}
    /// ```
    ///
    /// For δ < 1 the mixed minimum is not available and `u0 = 0` is required,
    /// in which case only `c_K1` enters `M`.
    pub fn empirical(params: &ScaleInvariantParams, p: f64, bounds: &BoundReport, data_l1: f64, r: f64, u0_is_zero: bool) -> Result<Self> {
        positive("R", r)?;
        let c_data = match bounds.c_mix {
            Some(mix) => bounds.c_k1.min(mix),
            None if u0_is_zero => bounds.c_k1,
            None => {
                return Err(Error::Config(
                    "for 0 <= delta < 1 the empirical frame needs u0 = 0".into(),
                ))
            }
        };
        let w = params.integral_weight();
        let half_sigma = 0.5 * params.sigma();
        let two_r = 2.0 * r;
        let ratio = (two_r / (1.0 + two_r)).powf(half_sigma);
        let m = w * c_data * ratio * data_l1;
        let c = w * bounds.c_e * two_r.powf(-half_sigma) * two_r.powf(1.0 - p) * ratio;
        let mut frame = Self::from_params(1, params, p, m.max(0.0), c.max(0.0), r)?;
        frame.source = ConstantSource::Empirical {
            c_k1: bounds.c_k1,
            c_e: bounds.c_e,
            c_mix: bounds.c_mix,
            data_l1,
        };
        Ok(frame)
    }

    pub fn is_critical(&self) -> bool {
        (self.a - 1.0).abs() <= CRITICAL_A_TOL
    }
}

/// One row of the inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityRow {
    pub z: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub eps: f64,
    pub frame: ComparisonFrame,
    pub rows: Vec<InequalityRow>,
    /// `min_z (LHS − RHS)`.
    pub min_gap: f64,
    pub argmin_z: f64,
    pub partial_trace: bool,
}

impl InequalityReport {
    /// The inequality holds at every sample up to `slack`.
    pub fn holds_with_slack(&self, slack: f64) -> bool {
        self.min_gap >= -slack
    }

    pub fn holds(&self) -> bool {
        self.holds_with_slack(0.0)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "z,LHS,RHS")?;
        for r in &self.rows {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", r.z, r.lhs, r.rhs)?;
        }
        Ok(())
    }
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fr = &self.frame;
        writeln!(f, "fundamental inequality check")?;
        writeln!(f, "  eps = {}, p = {}, a = {}, R = {}", self.eps, fr.p, fr.a, fr.r)?;
        writeln!(f, "  M = {:.6e}, C = {:.6e} ({:?})", fr.m, fr.c, fr.source)?;
        if let (Some(first), Some(last)) = (self.rows.first(), self.rows.last()) {
            writeln!(f, "  z in [{}, {}], {} samples", first.z, last.z, self.rows.len())?;
        }
        writeln!(f, "  min(LHS - RHS) = {:.6e} at z = {}", self.min_gap, self.argmin_z)?;
        if self.partial_trace {
            writeln!(f, "  warning: the characteristic left the computed field; trace is partial")?;
        }
        write!(f, "  verdict: {}", if self.holds() { "holds" } else { "violated" })
    }
}

/// Evaluates both sides of the inequality on the trace; the integral is the
/// cumulative trapezoidal rule on the sampled points.
pub fn verify_fundamental_inequality(trace: &ReducedTrace, frame: &ComparisonFrame, eps: f64) -> Result<InequalityReport> {
    if trace.zs.len() < 3 {
        return Err(Error::Config(format!(
            "trace has {} points; at least 3 are needed",
            trace.zs.len()
        )));
    }
    if trace.zs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("trace abscissae must be strictly increasing".into()));
    }
    let integrand = |z: f64, u: f64| (frame.r + z).powf(-frame.a) * u.abs().powf(frame.p);
    let base = frame.m * eps;
    let mut rows = Vec::with_capacity(trace.zs.len());
    let mut acc = 0.0;
    // Integral from R up to the first sample, if the trace starts later.
    if trace.zs[0] > frame.r {
        acc = 0.5 * (trace.zs[0] - frame.r) * integrand(trace.zs[0], trace.us[0]);
    }
    let mut prev = integrand(trace.zs[0], trace.us[0]);
    for k in 0..trace.zs.len() {
        if k > 0 {
            let cur = integrand(trace.zs[k], trace.us[k]);
            acc += 0.5 * (trace.zs[k] - trace.zs[k - 1]) * (prev + cur);
            prev = cur;
        }
        rows.push(InequalityRow {
            z: trace.zs[k],
            lhs: trace.us[k],
            rhs: base + frame.c * acc,
        });
    }
    let (argmin_z, min_gap) = rows
        .iter()
        .map(|r| (r.z, r.lhs - r.rhs))
        .fold((f64::NAN, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(InequalityReport {
        eps,
        frame: frame.clone(),
        rows,
        min_gap,
        argmin_z,
        partial_trace: trace.partial,
    })
}

/// Blow-up point of the comparison function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComparisonBlowup {
    /// `G` blows up at `z`, i.e. at time `t = R + z` on the characteristic.
    /// `immediate` flags `z < 2R`, where the closed form is outside the
    /// range `t >= 2R` in which the frame was derived.
    At { z: f64, t: f64, immediate: bool },
    /// `a > 1`: the comparison argument gives no blow-up.
    NoBlowup,
}

impl ComparisonBlowup {
    pub fn z(&self) -> Option<f64> {
        match *self {
            ComparisonBlowup::At { z, .. } => Some(z),
            ComparisonBlowup::NoBlowup => None,
        }
    }
}

/// Closed-form blow-up point of `G' = C (R+z)^{−a} G^p`, `G(R) = Mε`:
///
/// - `a < 1`: `(Mε)^{1−p} = C(p−1)/(1−a) ((R+z)^{1−a} − (2R)^{1−a})`;
/// - `a = 1`: `R + z = 2R exp((Mε)^{1−p}/(C(p−1)))`.
pub fn comparison_blowup_z(frame: &ComparisonFrame, eps: f64) -> Result<ComparisonBlowup> {
    positive("eps", eps)?;
    positive("M", frame.m)?;
    positive("C", frame.c)?;
    let r = frame.r;
    let k = (frame.m * eps).powf(1.0 - frame.p) / (frame.c * (frame.p - 1.0));
    let log_two_r = (2.0 * r).ln();
    let log_t = if frame.is_critical() {
        log_two_r + k
    } else if frame.a < 1.0 {
        let one_minus_a = 1.0 - frame.a;
        // ln(R+z) = ln(2R) + ln(1 + (1−a) K (2R)^{a−1}) / (1−a), stable as a → 1.
        log_two_r + (one_minus_a * k * (-one_minus_a * log_two_r).exp()).ln_1p() / one_minus_a
    } else {
        return Ok(ComparisonBlowup::NoBlowup);
    };
    let t = log_t.exp();
    let z = t - r;
    Ok(ComparisonBlowup::At {
        z,
        t,
        immediate: z < 2.0 * r,
    })
}

/// Lifespan rate implied by the frame: algebraic `(1/(p−1) − (n+σ−1)/2)^{−1}`
/// for `a < 1`, exponential `p − 1` for `a = 1`.
pub fn lifespan_rate_from_frame(frame: &ComparisonFrame) -> Result<LifespanPrediction> {
    if frame.a > 1.0 && !frame.is_critical() {
        return Err(Error::NoPrediction {
            p: frame.p,
            upper: glassey(frame.dim).unwrap_or(f64::INFINITY),
        });
    }
    lifespan_prediction_for_dimension(frame.dim, frame.p, crate::params::DEFAULT_CRITICAL_TOL)
}
