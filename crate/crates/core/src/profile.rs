//! Cauchy data and source terms.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::quadrature::integrate_with_breaks;

/// Shape of a compactly supported bump `φ((x − c)/r)` on `|x − c| < r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BumpFamily {
    /// `exp(−1/(1 − s²))`, infinitely smooth.
    Smooth,
    /// `(1 − s²)^k`, of class `C^{k−1}`, with a closed-form antiderivative.
    Polynomial { k: u32 },
}

impl fmt::Display for BumpFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BumpFamily::Smooth => write!(f, "smooth"),
            BumpFamily::Polynomial { k } => write!(f, "poly{k}"),
        }
    }
}

/// A scaled, shifted bump `amplitude · φ((x − center)/radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub family: BumpFamily,
    pub amplitude: f64,
    pub center: f64,
    pub radius: f64,
}

fn binomial(k: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

impl Bump {
    pub fn new(family: BumpFamily, amplitude: f64, center: f64, radius: f64) -> Result<Self> {
        positive("radius", radius)?;
        if !amplitude.is_finite() || !center.is_finite() {
            return Err(Error::InvalidParameter {
                name: "bump",
                value: if amplitude.is_finite() { center } else { amplitude },
                reason: "amplitude and center must be finite",
            });
        }
        if let BumpFamily::Polynomial { k } = family {
            if k < 1 {
                return Err(Error::InvalidParameter {
                    name: "k",
                    value: k as f64,
                    reason: "polynomial bump needs k >= 1",
                });
            }
        }
        Ok(Self {
            family,
            amplitude,
            center,
            radius,
        })
    }

    /// Centered smooth bump of unit height on `(−r, r)`.
    pub fn smooth(radius: f64) -> Result<Self> {
        Self::new(BumpFamily::Smooth, 1.0, 0.0, radius)
    }

    pub fn polynomial(k: u32, radius: f64) -> Result<Self> {
        Self::new(BumpFamily::Polynomial { k }, 1.0, 0.0, radius)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    fn s(&self, x: f64) -> Option<f64> {
        let s = (x - self.center) / self.radius;
        (s.abs() < 1.0).then_some(s)
    }

    pub fn value(&self, x: f64) -> f64 {
        let Some(s) = self.s(x) else { return 0.0 };
        let w = 1.0 - s * s;
        self.amplitude
            * match self.family {
                BumpFamily::Smooth => (-1.0 / w).exp(),
                BumpFamily::Polynomial { k } => w.powi(k as i32),
            }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let Some(s) = self.s(x) else { return 0.0 };
        let w = 1.0 - s * s;
        let d = match self.family {
            BumpFamily::Smooth => (-1.0 / w).exp() * (-2.0 * s / (w * w)),
            BumpFamily::Polynomial { k } => -2.0 * k as f64 * s * w.powi(k as i32 - 1),
        };
        self.amplitude * d / self.radius
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let Some(s) = self.s(x) else { return 0.0 };
        let w = 1.0 - s * s;
        let d = match self.family {
            BumpFamily::Smooth => (-1.0 / w).exp() * (6.0 * s.powi(4) - 2.0) / w.powi(4),
            BumpFamily::Polynomial { k } => {
                let kf = k as f64;
                let mut v = -2.0 * kf * w.powi(k as i32 - 1);
                if k >= 2 {
                    v += 4.0 * kf * (kf - 1.0) * s * s * w.powi(k as i32 - 2);
                }
                v
            }
        };
        self.amplitude * d / (self.radius * self.radius)
    }

    /// `∫_{-∞}^{x} bump`.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        let s = ((x - self.center) / self.radius).clamp(-1.0, 1.0);
        if x <= lo {
            return Ok(0.0);
        }
        match self.family {
            BumpFamily::Polynomial { k } => {
                // ∫_{-1}^{s} (1 − r²)^k dr by binomial expansion.
                let prim = |r: f64| -> f64 {
                    (0..=k)
                        .map(|j| {
                            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                            sign * binomial(k, j) * r.powi(2 * j as i32 + 1) / (2 * j + 1) as f64
                        })
                        .sum()
                };
                Ok(self.amplitude * self.radius * (prim(s) - prim(-1.0)))
            }
            BumpFamily::Smooth => {
                let upper = x.min(hi);
                let r = integrate_with_breaks(|y| self.value(y), &[lo, upper], 1e-13 * self.radius.max(1.0), 4000)?;
                Ok(r.value)
            }
        }
    }

    /// `∫_a^b bump`.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok(self.antiderivative(b)? - self.antiderivative(a)?)
    }
}

/// Thread-safe sampler of a real function of one variable.
pub type Sampler = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Thread-safe sampler of a function of `(t, x)`.
pub type SpacetimeSampler = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Cauchy data `u(0) = ε u0`, `u_t(0) = ε u1` supported in `[−R, R]`.
///
/// The samplers return the unscaled profiles; the amplitude `eps` is applied
/// by the solvers.
#[derive(Clone)]
pub struct CauchyProfile {
    pub u0: Sampler,
    pub u1: Sampler,
    pub d_u0: Sampler,
    pub radius: f64,
    pub eps: f64,
    pub family: String,
    /// Points where the data may lose smoothness (support ends, kinks).
    pub breakpoints: Vec<f64>,
    /// True when `u0` is identically zero by construction.
    pub u0_is_zero: bool,
}

impl fmt::Debug for CauchyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchyProfile")
            .field("radius", &self.radius)
            .field("eps", &self.eps)
            .field("family", &self.family)
            .field("breakpoints", &self.breakpoints)
            .field("u0_is_zero", &self.u0_is_zero)
            .finish()
    }
}

impl CauchyProfile {
    /// Data built from optional bumps; `None` means the zero function.
    pub fn from_bumps(u0: Option<Bump>, u1: Option<Bump>, radius: f64, eps: f64) -> Result<Self> {
        positive("R", radius)?;
        crate::error::nonnegative("eps", eps)?;
        let mut breakpoints = vec![-radius, radius];
        let mut names = Vec::new();
        for (label, b) in [("u0", &u0), ("u1", &u1)] {
            if let Some(b) = b {
                let (lo, hi) = b.support();
                if lo < -radius * (1.0 + 1e-14) || hi > radius * (1.0 + 1e-14) {
                    return Err(Error::Config(format!(
                        "{label} support [{lo}, {hi}] exceeds [-R, R] with R = {radius}"
                    )));
                }
                breakpoints.extend([lo, hi]);
                names.push(format!("{label}={}", b.family));
            }
        }
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        let zero: Sampler = Arc::new(|_| 0.0);
        let (u0s, du0s): (Sampler, Sampler) = match u0 {
            Some(b) => (Arc::new(move |x| b.value(x)), Arc::new(move |x| b.derivative(x))),
            None => (zero.clone(), zero.clone()),
        };
        let u1s: Sampler = match u1 {
            Some(b) => Arc::new(move |x| b.value(x)),
            None => zero,
        };
        Ok(Self {
            u0: u0s,
            u1: u1s,
            d_u0: du0s,
            radius,
            eps,
            family: if names.is_empty() { "zero".into() } else { names.join(",") },
            breakpoints,
            u0_is_zero: u0.is_none(),
        })
    }

    /// Zero data.
    pub fn zero(radius: f64) -> Result<Self> {
        Self::from_bumps(None, None, radius, 0.0)
    }

    /// The default experiment profile: `u0 = u1 = φ(x/R)` with the given family.
    pub fn bump_pair(family: BumpFamily, radius: f64, eps: f64) -> Result<Self> {
        let b = Bump::new(family, 1.0, 0.0, radius)?;
        Self::from_bumps(Some(b), Some(b), radius, eps)
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        let mut out = self.clone();
        out.eps = eps;
        out
    }

    /// Scaled initial displacement `ε u0(x)`.
    pub fn initial_u(&self, x: f64) -> f64 {
        self.eps * (self.u0)(x)
    }

    /// Scaled initial velocity `ε u1(x)`.
    pub fn initial_ut(&self, x: f64) -> f64 {
        self.eps * (self.u1)(x)
    }

    /// Checks that both profiles vanish on `probes` points outside `[−R, R]`.
    pub fn check_support(&self, probes: usize) -> Result<()> {
        for i in 0..probes {
            let x = self.radius * (1.0 + 1e-12 + 4.0 * i as f64 / probes.max(1) as f64);
            for y in [x, -x] {
                if (self.u0)(y) != 0.0 || (self.u1)(y) != 0.0 {
                    return Err(Error::Config(format!("data do not vanish at x = {y} outside [-R, R]")));
                }
            }
        }
        Ok(())
    }

    /// `‖u0 + u1‖_{L¹}` (unscaled), computed by quadrature over `[−R, R]`.
    pub fn l1_norm_sum(&self) -> Result<f64> {
        let r = integrate_with_breaks(
            |y| ((self.u0)(y) + (self.u1)(y)).abs(),
            &self.breakpoints,
            1e-12 * self.radius.max(1.0),
            4000,
        )?;
        Ok(r.value)
    }
}

/// Axis-aligned box `[t_min, t_max] × [x_min, x_max]` containing the support
/// of a source term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportBox {
    pub t_min: f64,
    pub t_max: f64,
    pub x_min: f64,
    pub x_max: f64,
}

/// Source term `f(t, x)` of the linear problem.
#[derive(Clone)]
pub struct SourceTerm {
    pub f: SpacetimeSampler,
    pub support_hint: Option<SupportBox>,
    is_zero: bool,
}

impl fmt::Debug for SourceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SourceTerm")
            .field("support_hint", &self.support_hint)
            .field("is_zero", &self.is_zero)
            .finish()
    }
}

impl SourceTerm {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, support_hint: Option<SupportBox>) -> Self {
        Self {
            f: Arc::new(f),
            support_hint,
            is_zero: false,
        }
    }

    pub fn zero() -> Self {
        Self {
            f: Arc::new(|_, _| 0.0),
            support_hint: None,
            is_zero: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        if self.is_zero {
            0.0
        } else {
            (self.f)(t, x)
        }
    }

    /// `bump(x) · cos(t)`, a smooth source used by the convergence checks.
    pub fn bump_cos(bump: Bump) -> Self {
        let (lo, hi) = bump.support();
        Self::new(
            move |t, x| bump.value(x) * t.cos(),
            Some(SupportBox {
                t_min: 0.0,
                t_max: f64::INFINITY,
                x_min: lo,
                x_max: hi,
            }),
        )
    }
}
