//! Coefficient algebra and critical exponents.
//!
//! All exponent functions take a real "dimension" `d` because the blow-up
//! ranges are stated for shifted dimensions `n + σ` with real `σ`.

use serde::{Deserialize, Serialize};

use crate::error::{nonnegative, Error, Result};

/// Default tolerance used to decide whether a quantity sits on a critical set.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-12;

/// `δ = (μ − 1)² − 4ν²`.
pub fn delta_of(mu: f64, nu2: f64) -> f64 {
    (mu - 1.0) * (mu - 1.0) - 4.0 * nu2
}

/// Damping/mass coefficients `(μ, ν²)` together with the derived `δ`, `γ`, `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ScaleInvariantParams {
    mu: f64,
    nu2: f64,
    delta: f64,
    sqrt_delta: f64,
    gamma: f64,
    sigma: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    mu: f64,
    nu2: f64,
}

impl TryFrom<RawParams> for ScaleInvariantParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ScaleInvariantParams::new(raw.mu, raw.nu2)
    }
}

impl From<ScaleInvariantParams> for RawParams {
    fn from(p: ScaleInvariantParams) -> Self {
        RawParams { mu: p.mu, nu2: p.nu2 }
    }
}

impl ScaleInvariantParams {
    /// Builds the parameter bundle. Rejects negative `μ`, `ν²` and `δ < 0`.
    pub fn new(mu: f64, nu2: f64) -> Result<Self> {
        nonnegative("mu", mu)?;
        nonnegative("nu2", nu2)?;
        let delta = delta_of(mu, nu2);
        if delta < 0.0 {
            return Err(Error::NegativeDelta { delta });
        }
        let sqrt_delta = delta.sqrt();
        let gamma = 0.5 * (1.0 - sqrt_delta);
        // Hard branch; the tie δ = 1 takes the σ = μ branch (both agree there).
        let sigma = if delta >= 1.0 {
            mu
        } else {
            mu + 1.0 - sqrt_delta
        };
        Ok(Self {
            mu,
            nu2,
            delta,
            sqrt_delta,
            gamma,
            sigma,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu2(&self) -> f64 {
        self.nu2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sqrt_delta(&self) -> f64 {
        self.sqrt_delta
    }

    /// Kernel parameter `γ = (1 − √δ)/2`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Dimensional shift `σ`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `2^{-√δ}`, the normalisation in front of the integral terms of the
    /// representation formula.
    pub fn integral_weight(&self) -> f64 {
        (-self.sqrt_delta).exp2()
    }
}

/// Shift `σ` of a parameter bundle.
pub fn sigma_of(params: &ScaleInvariantParams) -> f64 {
    params.sigma()
}

/// Parameters of the weakly coupled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub comp1: ScaleInvariantParams,
    pub comp2: ScaleInvariantParams,
    pub p: f64,
    pub q: f64,
}

impl SystemParams {
    pub fn new(comp1: ScaleInvariantParams, comp2: ScaleInvariantParams, p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v.is_finite() && v > 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "nonlinearity exponent must exceed 1",
                });
            }
        }
        Ok(Self { comp1, comp2, p, q })
    }

    pub fn sigma1(&self) -> f64 {
        self.comp1.sigma()
    }

    pub fn sigma2(&self) -> f64 {
        self.comp2.sigma()
    }
}

/// Glassey exponent `(d+1)/(d−1)`.
pub fn glassey(d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 1.0) {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "Glassey exponent needs d > 1",
        });
    }
    Ok((d + 1.0) / (d - 1.0))
}

/// Fujita exponent `1 + 2/d`.
pub fn fujita(d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "Fujita exponent needs d > 0",
        });
    }
    Ok(1.0 + 2.0 / d)
}

/// Strauss exponent: positive root of `(d−1)p² − (d+1)p − 2 = 0`.
pub fn strauss(d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 1.0) {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "Strauss exponent needs d > 1",
        });
    }
    let a = d - 1.0;
    let b = -(d + 1.0);
    let c = -2.0;
    // b < 0, so q = -(b - sqrt(disc))/2 is free of cancellation and q/a is the
    // positive root (the other one, c/q, is negative).
    let disc = b * b - 4.0 * a * c;
    let q = -0.5 * (b - disc.sqrt());
    Ok(q / a)
}

/// Critical-curve function `Λ(d,p,q) = (p+1)/(pq−1) − (d−1)/2`.
pub fn lambda_curve(d: f64, p: f64, q: f64) -> Result<f64> {
    let pq = p * q;
    if !(pq.is_finite() && pq > 1.0) {
        return Err(Error::InvalidParameter {
            name: "pq",
            value: pq,
            reason: "critical curve needs pq > 1",
        });
    }
    Ok((p + 1.0) / (pq - 1.0) - 0.5 * (d - 1.0))
}

/// Scale against which `Λ(d,p,q)` is compared when testing for zero.
fn lambda_scale(d: f64, p: f64, q: f64) -> f64 {
    1f64.max(((p + 1.0) / (p * q - 1.0)).abs())
        .max((0.5 * (d - 1.0)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `Ω < 0`: no blow-up claim.
    Supercritical,
    /// `Ω > 0`: blow-up with an algebraic lifespan bound.
    Subcritical,
    /// `Λ(n+σ1,p,q) = 0 > Λ(n+σ2,q,p)`.
    CriticalBranch1,
    /// `Λ(n+σ2,q,p) = 0 > Λ(n+σ1,p,q)`.
    CriticalBranch2,
    /// Both branches vanish.
    Cusp,
}

impl Regime {
    pub fn blows_up(self) -> bool {
        !matches!(self, Regime::Supercritical)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCurveReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub omega: f64,
    pub regime: Regime,
}

/// Classifies `(p, q)` against the shifted critical curve.
///
/// A value of `Λ` counts as zero when `|Λ| < tol · s`, where `s >= 1` is the
/// magnitude of the two terms whose difference forms `Λ`.
pub fn classify_sigmas(n: u32, sigma1: f64, sigma2: f64, p: f64, q: f64, tol: f64) -> Result<CriticalCurveReport> {
    crate::error::positive("tol", tol)?;
    let d1 = n as f64 + sigma1;
    let d2 = n as f64 + sigma2;
    let lambda1 = lambda_curve(d1, p, q)?;
    let lambda2 = lambda_curve(d2, q, p)?;
    let zero1 = lambda1.abs() < tol * lambda_scale(d1, p, q);
    let zero2 = lambda2.abs() < tol * lambda_scale(d2, q, p);
    let omega = lambda1.max(lambda2);
    let regime = if zero1 && zero2 {
        Regime::Cusp
    } else if zero1 && lambda2 < 0.0 {
        Regime::CriticalBranch1
    } else if zero2 && lambda1 < 0.0 {
        Regime::CriticalBranch2
    } else if omega > 0.0 {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    };
    Ok(CriticalCurveReport {
        lambda1,
        lambda2,
        omega,
        regime,
    })
}

pub fn classify_system(n: u32, sys: &SystemParams, tol: f64) -> Result<CriticalCurveReport> {
    classify_sigmas(n, sys.sigma1(), sys.sigma2(), sys.p, sys.q, tol)
}

/// The cusp point of the shifted critical curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspPoint {
    pub p: f64,
    pub q: f64,
    /// Both exponents exceed 1, so the point lies in the admissible range.
    pub admissible: bool,
}

/// `p̃ = (n+σ1+1)/(n+σ2−1)`, `q̃ = (n+σ2+1)/(n+σ1−1)`.
///
/// Points with `p̃ <= 1` or `q̃ <= 1` are returned with `admissible = false`
/// rather than as errors so that whole `(σ1, σ2)` planes can be mapped.
pub fn cusp_exponents(n: u32, sigma1: f64, sigma2: f64) -> Result<CuspPoint> {
    nonnegative("sigma1", sigma1)?;
    nonnegative("sigma2", sigma2)?;
    let d1 = n as f64 + sigma1;
    let d2 = n as f64 + sigma2;
    if d1 <= 1.0 || d2 <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "n + sigma",
            value: d1.min(d2),
            reason: "cusp exponents need n + sigma > 1 on both components",
        });
    }
    let p = (d1 + 1.0) / (d2 - 1.0);
    let q = (d2 + 1.0) / (d1 - 1.0);
    Ok(CuspPoint {
        p,
        q,
        admissible: p > 1.0 && q > 1.0,
    })
}

/// Form of an upper bound for the lifespan `T(ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LifespanPrediction {
    /// `T(ε) <= C ε^{-rate}`.
    Algebraic { rate: f64 },
    /// `T(ε) <= exp(C ε^{-rate})`.
    Exponential { rate: f64 },
}

impl LifespanPrediction {
    pub fn rate(&self) -> f64 {
        match *self {
            LifespanPrediction::Algebraic { rate } | LifespanPrediction::Exponential { rate } => rate,
        }
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self, LifespanPrediction::Exponential { .. })
    }
}

/// Algebraic lifespan rate `(1/(p−1) − (d−1)/2)^{-1}` for the single equation
/// in shifted dimension `d = n + σ`.
pub fn algebraic_rate(d: f64, p: f64) -> f64 {
    1.0 / (1.0 / (p - 1.0) - 0.5 * (d - 1.0))
}

/// Lifespan prediction for the single equation in shifted dimension `d`.
///
/// For `d <= 1` the Glassey exponent is infinite and every `p > 1` is
/// subcritical.
pub fn lifespan_prediction_for_dimension(d: f64, p: f64, tol: f64) -> Result<LifespanPrediction> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::NoPrediction {
            p,
            upper: glassey(d).unwrap_or(f64::INFINITY),
        });
    }
    if d <= 1.0 {
        return Ok(LifespanPrediction::Algebraic {
            rate: algebraic_rate(d, p),
        });
    }
    let p_gla = glassey(d)?;
    if (p - p_gla).abs() <= tol * p_gla {
        Ok(LifespanPrediction::Exponential { rate: p - 1.0 })
    } else if p < p_gla {
        Ok(LifespanPrediction::Algebraic {
            rate: algebraic_rate(d, p),
        })
    } else {
        Err(Error::NoPrediction { p, upper: p_gla })
    }
}

/// Lifespan prediction for the single equation in dimension `n`.
pub fn predicted_lifespan_exponent(n: u32, params: &ScaleInvariantParams, p: f64) -> Result<LifespanPrediction> {
    lifespan_prediction_for_dimension(n as f64 + params.sigma(), p, DEFAULT_CRITICAL_TOL)
}

/// Exponential rate at the cusp: `(pq−1)/(p+1)` when `σ1 >= σ2`, otherwise
/// `(pq−1)/(q+1)`.
///
/// Uses `(pq−1)/(p+1) = (q−1) + (p−q)/(p+1)`, which returns exactly `q − 1`
/// when `p == q`.
pub fn cusp_rate(p: f64, q: f64, sigma1: f64, sigma2: f64) -> f64 {
    if sigma1 >= sigma2 {
        (q - 1.0) + (p - q) / (p + 1.0)
    } else {
        (p - 1.0) + (q - p) / (q + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64, nu2: f64) -> ScaleInvariantParams {
        ScaleInvariantParams::new(mu, nu2).unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_of(2.0, 0.0), 1.0);
        assert_eq!(delta_of(0.0, 0.0), 1.0);
        assert_eq!(delta_of(3.0, 0.75), 1.0);
    }

    #[test]
    fn sigma_branches() {
        assert_eq!(params(2.0, 0.0).sigma(), 2.0);
        assert_eq!(params(0.0, 0.0).sigma(), 0.0);
        assert_eq!(params(1.0, 0.0).sigma(), 2.0);
        assert_eq!(sigma_of(&params(3.0, 0.0)), 3.0);
    }

    #[test]
    fn negative_delta_rejected() {
        assert!(matches!(
            ScaleInvariantParams::new(1.0, 0.5),
            Err(Error::NegativeDelta { .. })
        ));
        assert!(ScaleInvariantParams::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn sigma_continuous_at_delta_one() {
        // mu = 2 fixed, nu2 = h/4 gives delta = 1 - h.
        let at = params(2.0, 0.0);
        for h in [1e-4f64, 1e-8] {
            let below = params(2.0, h / 4.0);
            assert!(below.delta() < 1.0);
            assert!((below.sigma() - at.sigma()).abs() <= h.sqrt());
        }
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(glassey(3.0).unwrap(), 2.0);
        assert_eq!(glassey(2.0).unwrap(), 3.0);
        assert_eq!(glassey(1.0 + 2.0).unwrap(), 2.0);
        assert!(glassey(1.0).is_err());
        assert_eq!(fujita(1.0).unwrap(), 3.0);
        assert_eq!(fujita(2.0).unwrap(), 2.0);
        assert_eq!(fujita(4.0).unwrap(), 1.5);
        assert!(fujita(0.0).is_err());
        assert!((strauss(3.0).unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((strauss(2.0).unwrap() - (3.0 + 17f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(strauss(0.5).is_err());
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_curve(1.0, 2.0, 2.0).unwrap(), 1.0);
        assert_eq!(lambda_curve(3.0, 2.0, 2.0).unwrap(), 0.0);
        assert!(lambda_curve(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn classification_examples() {
        let r = classify_sigmas(1, 2.0, 2.0, 2.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.regime, Regime::Cusp);
        let r = classify_sigmas(1, 0.0, 0.0, 2.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.regime, Regime::Subcritical);
        assert_eq!(r.omega, 1.0);
        let r = classify_sigmas(3, 0.0, 0.0, 3.0, 3.0, 1e-12).unwrap();
        assert_eq!(r.regime, Regime::Supercritical);
        assert_eq!(r.omega, -0.5);
        // Branch 1 critical: n=1, sigma1=2, sigma2=0 with q chosen so Λ1 = 0.
        // (p+1)/(pq-1) = 1 with p = 2 gives q = 2; Λ2 = 3/3 - 0 = 1 > 0, so take
        // sigma2 larger to push Λ2 below zero.
        let r = classify_sigmas(1, 2.0, 6.0, 2.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.regime, Regime::CriticalBranch1);
        let r = classify_sigmas(1, 6.0, 2.0, 2.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.regime, Regime::CriticalBranch2);
    }

    #[test]
    fn cusp_examples() {
        let c = cusp_exponents(1, 2.0, 2.0).unwrap();
        assert_eq!((c.p, c.q), (2.0, 2.0));
        assert!(c.admissible);
        let c = cusp_exponents(3, 0.0, 0.0).unwrap();
        assert_eq!((c.p, c.q), (2.0, 2.0));
        let c = cusp_exponents(1, 2.0, 4.0).unwrap();
        assert_eq!((c.p, c.q), (1.0, 3.0));
        assert!(!c.admissible);
        assert!(cusp_exponents(1, 0.0, 2.0).is_err());
    }

    #[test]
    fn lifespan_examples() {
        let pred = predicted_lifespan_exponent(1, &params(2.0, 0.0), 1.5).unwrap();
        assert_eq!(pred, LifespanPrediction::Algebraic { rate: 1.0 });
        let pred = predicted_lifespan_exponent(1, &params(2.0, 0.0), 2.0).unwrap();
        assert_eq!(pred, LifespanPrediction::Exponential { rate: 1.0 });
        let pred = predicted_lifespan_exponent(1, &params(0.0, 0.0), 1.5).unwrap();
        assert_eq!(pred, LifespanPrediction::Algebraic { rate: 0.5 });
        assert!(matches!(
            predicted_lifespan_exponent(1, &params(2.0, 0.0), 2.5),
            Err(Error::NoPrediction { .. })
        ));
    }

    #[test]
    fn cusp_rate_collapses_to_single_equation() {
        for d in [2.0, 3.0, 4.5, 7.0] {
            let p = glassey(d).unwrap();
            assert_eq!(cusp_rate(p, p, 1.0, 1.0), p - 1.0);
        }
    }
}
