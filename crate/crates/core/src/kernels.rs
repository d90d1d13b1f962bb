//! Kernel functions of the one-dimensional representation formula.
//!
//! ```text
//! E(t,x;b,y) = (1+t)^{-μ/2+γ} (1+b)^{μ/2+γ} ((t+b+2)² − (y−x)²)^{-γ} F(γ,γ;1;ζ),
//! ζ = ((t−b)² − (y−x)²) / ((t+b+2)² − (y−x)²),
//! K0(t,x;y) = −∂_b E(t,x;b,y)|_{b=0},   K1(t,x;y) = E(t,x;0,y),
//! ```
//!
//! defined on the backward light cone `0 <= b <= t`, `|y − x| <= t − b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergeometric::{hyp2f1, HypergeomQuery};
use crate::params::ScaleInvariantParams;

/// Relative slack within which points just outside the light cone are pulled
/// back onto it.
pub const LIGHTCONE_CLAMP: f64 = 1e-12;

/// A point `(t, x, b, y)` of the Duhamel domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub t: f64,
    pub x: f64,
    pub b: f64,
    pub y: f64,
    pub zeta: f64,
}

impl KernelPoint {
    pub fn new(t: f64, x: f64, b: f64, y: f64) -> Result<Self> {
        let slack = LIGHTCONE_CLAMP * (1.0 + t.abs());
        let finite = t.is_finite() && x.is_finite() && b.is_finite() && y.is_finite();
        if !finite || b < 0.0 || b > t + slack {
            return Err(Error::OutOfDomain { t, x, b, y });
        }
        let b = b.min(t);
        let s = (y - x).abs();
        let gap = t - b - s;
        if gap < -slack {
            return Err(Error::OutOfDomain { t, x, b, y });
        }
        let zeta = if gap < slack {
            0.0
        } else {
            zeta_factored(t, b, s)
        };
        Ok(Self { t, x, b, y, zeta })
    }
}

/// `ζ` in factored form, `s = |y − x|`.
fn zeta_factored(t: f64, b: f64, s: f64) -> f64 {
    let num = ((t - b) - s) * ((t - b) + s);
    let den = ((t + b + 2.0) - s) * ((t + b + 2.0) + s);
    (num / den).clamp(0.0, 1.0 - f64::EPSILON)
}

fn hyp(a: f64, c: f64, z: f64) -> Result<f64> {
    hyp2f1(&HypergeomQuery::new(a, a, c, z))
}

/// `E · (1+t)^{t_shift} · (1+b)^{b_shift}` with the power factors merged, so
/// that e.g. `E (1+t)^{σ/2} (1+b)^{-σ/2}` evaluates exactly to 1 for γ = 0,
/// μ = σ.
fn e_scaled(params: &ScaleInvariantParams, pt: &KernelPoint, t_shift: f64, b_shift: f64) -> Result<f64> {
    let mu = params.mu();
    let g = params.gamma();
    let s = pt.y - pt.x;
    let d = ((pt.t + pt.b + 2.0) - s.abs()) * ((pt.t + pt.b + 2.0) + s.abs());
    let f = hyp(g, 1.0, pt.zeta)?;
    Ok((1.0 + pt.t).powf(-0.5 * mu + g + t_shift) * (1.0 + pt.b).powf(0.5 * mu + g + b_shift) * d.powf(-g) * f)
}

/// Kernel `E` at a domain point.
pub fn kernel_e(params: &ScaleInvariantParams, pt: &KernelPoint) -> Result<f64> {
    e_scaled(params, pt, 0.0, 0.0)
}

fn check_cone(t: f64, x: f64, y: f64) -> Result<KernelPoint> {
    KernelPoint::new(t, x, 0.0, y)
}

/// Analytic `∂_b E(t,x;b,y)` at `b = 0`.
pub fn kernel_db_e_at_b0(params: &ScaleInvariantParams, t: f64, x: f64, y: f64) -> Result<f64> {
    let pt = check_cone(t, x, y)?;
    let (_, db) = e_and_db_at_b0(params, &pt, 0.0)?;
    Ok(db)
}

/// Returns `(E, ∂_b E)` at `b = 0`, both multiplied by `(1+t)^{t_shift}`.
fn e_and_db_at_b0(params: &ScaleInvariantParams, pt: &KernelPoint, t_shift: f64) -> Result<(f64, f64)> {
    let mu = params.mu();
    let g = params.gamma();
    let t = pt.t;
    let s = (pt.y - pt.x).abs();
    let d = ((t + 2.0) - s) * ((t + 2.0) + s);
    let zeta = pt.zeta;
    let f0 = hyp(g, 1.0, zeta)?;
    let prefactor = (1.0 + t).powf(-0.5 * mu + g + t_shift) * d.powf(-g);
    let e = prefactor * f0;
    let mut bracket = (0.5 * mu + g) * f0;
    if g != 0.0 {
        // s² − t(t+2) = (s − c)(s + c) − 1 with c = t + 1, kept factored.
        let lightcone = (s - (t + 1.0)) * (s + (t + 1.0)) + 1.0;
        let f1 = hyp(g + 1.0, 2.0, zeta)?;
        bracket += 4.0 * g * g * (1.0 + t) * lightcone / (d * d) * f1;
        bracket -= 2.0 * g * (t + 2.0) / d * f0;
    }
    Ok((e, prefactor * bracket))
}

/// Values of `E`, `K0`, `K1` at `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub e: f64,
    pub k0: f64,
    pub k1: f64,
}

/// `K1 = E(b=0)` and `K0 = −∂_b E(b=0)`, sharing one evaluation of `F(γ,γ;1;ζ)`.
pub fn kernel_k0_k1(params: &ScaleInvariantParams, t: f64, x: f64, y: f64) -> Result<KernelEval> {
    let pt = check_cone(t, x, y)?;
    let (e, db) = e_and_db_at_b0(params, &pt, 0.0)?;
    Ok(KernelEval { e, k0: -db, k1: e })
}

/// Empirical constants of the kernel lower bounds
/// `K1 ≳ (1+t)^{-σ/2}`, `E ≳ (1+t)^{-σ/2}(1+b)^{σ/2}` and, for δ >= 1,
/// `K0 + μK1 ≳ (1+t)^{-σ/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `min K1 (1+t)^{σ/2}` over the sample.
    pub c_k1: f64,
    /// `min E (1+t)^{σ/2} (1+b)^{-σ/2}`.
    pub c_e: f64,
    /// `min (K0 + μK1)(1+t)^{σ/2}`; `None` when δ < 1 (bound not claimed).
    pub c_mix: Option<f64>,
    /// Smallest raw value of `E` seen.
    pub min_e: f64,
    pub samples: usize,
}

impl BoundReport {
    pub fn k1_positive(&self) -> bool {
        self.c_k1 > 0.0
    }

    pub fn e_positive(&self) -> bool {
        self.c_e > 0.0 && self.min_e > 0.0
    }

    pub fn mix_positive(&self) -> Option<bool> {
        self.c_mix.map(|c| c > 0.0)
    }

    /// Every reported minimum is strictly positive.
    pub fn all_positive(&self) -> bool {
        self.k1_positive() && self.e_positive() && self.mix_positive().unwrap_or(true)
    }
}

pub fn verify_kernel_lower_bounds(params: &ScaleInvariantParams, sample: &[KernelPoint]) -> Result<BoundReport> {
    if sample.is_empty() {
        return Err(Error::Config("kernel bound check needs a nonempty sample".into()));
    }
    let half_sigma = 0.5 * params.sigma();
    let check_mix = params.delta() >= 1.0;
    let mut c_k1 = f64::INFINITY;
    let mut c_e = f64::INFINITY;
    let mut c_mix = f64::INFINITY;
    let mut min_e = f64::INFINITY;
    for pt in sample {
        let e_norm = e_scaled(params, pt, half_sigma, -half_sigma)?;
        c_e = c_e.min(e_norm);
        min_e = min_e.min(kernel_e(params, pt)?);
        let base = check_cone(pt.t, pt.x, pt.y)?;
        let (k1_norm, db_norm) = e_and_db_at_b0(params, &base, half_sigma)?;
        c_k1 = c_k1.min(k1_norm);
        if check_mix {
            c_mix = c_mix.min(params.mu() * k1_norm - db_norm);
        }
    }
    Ok(BoundReport {
        c_k1,
        c_e,
        c_mix: check_mix.then_some(c_mix),
        min_e,
        samples: sample.len(),
    })
}

/// Regular sample of the Duhamel domain: `nt` times in `(0, t_max]`, and for
/// each time `nb` values of `b` in `[0, t]` and `ny` values of `y` across the
/// cone `|y − x| <= t − b`, with `x = 0` (the kernels depend on `y − x` only).
pub fn domain_sample(t_max: f64, nt: usize, nb: usize, ny: usize) -> Result<Vec<KernelPoint>> {
    crate::error::positive("t_max", t_max)?;
    let mut out = Vec::with_capacity(nt * nb * ny);
    for i in 1..=nt {
        let t = t_max * i as f64 / nt as f64;
        for j in 0..nb {
            let b = if nb == 1 { 0.0 } else { t * j as f64 / (nb - 1) as f64 };
            let half = t - b;
            for k in 0..ny {
                let y = if ny == 1 {
                    0.0
                } else {
                    -half + 2.0 * half * k as f64 / (ny - 1) as f64
                };
                out.push(KernelPoint::new(t, 0.0, b, y)?);
            }
        }
    }
    Ok(out)
}
