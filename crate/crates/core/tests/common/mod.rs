//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use ode_solvers::{Dopri5, System, Vector1};
use scalewave::profile::CauchyProfile;
use twofloat::TwoFloat;

/// `exp(−1/(1 − s²))` on `(−1, 1)`, written out here rather than taken from
/// the library.
pub fn smooth(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

pub fn smooth_prime(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - s * s;
        -2.0 * s / (w * w) * (-1.0 / w).exp()
    }
}

/// A bump `A φ((x − c)/r)` and its derivative.
#[derive(Debug, Clone, Copy)]
pub struct OracleBump {
    pub amp: f64,
    pub center: f64,
    pub radius: f64,
}

impl OracleBump {
    pub fn value(&self, x: f64) -> f64 {
        self.amp * smooth((x - self.center) / self.radius)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.amp / self.radius * smooth_prime((x - self.center) / self.radius)
    }
}

/// Data `u0 = φ'`, `u1 = χ'` for bumps inside `[−R, R]`: every integral the
/// d'Alembert formula needs is a difference of bump values.
pub struct DerivativeData {
    pub phi: OracleBump,
    pub chi: OracleBump,
    pub radius: f64,
}

impl DerivativeData {
    pub fn standard() -> Self {
        Self {
            phi: OracleBump {
                amp: 1.3,
                center: -0.2,
                radius: 0.7,
            },
            chi: OracleBump {
                amp: 0.8,
                center: 0.3,
                radius: 0.6,
            },
            radius: 1.0,
        }
    }

    pub fn profile(&self, eps: f64) -> CauchyProfile {
        let (phi, chi) = (self.phi, self.chi);
        let mut data = CauchyProfile::zero(self.radius).unwrap();
        data.u0 = Arc::new(move |x| phi.derivative(x));
        data.u1 = Arc::new(move |x| chi.derivative(x));
        // u0' is only needed by the finite-difference start.
        data.d_u0 = Arc::new(move |x| {
            let h = 1e-6;
            (phi.derivative(x + h) - phi.derivative(x - h)) / (2.0 * h)
        });
        data.eps = eps;
        data.u0_is_zero = false;
        data.family = "oracle-derivative".into();
        let mut bp = vec![-self.radius, self.radius];
        for b in [phi, chi] {
            bp.extend([b.center - b.radius, b.center + b.radius]);
        }
        bp.sort_by(f64::total_cmp);
        data.breakpoints = bp;
        data
    }

    /// d'Alembert solution of the free wave equation with data `(φ', χ')`.
    pub fn free_wave(&self, t: f64, x: f64) -> f64 {
        0.5 * (self.phi.derivative(x + t) + self.phi.derivative(x - t))
            + 0.5 * (self.chi.value(x + t) - self.chi.value(x - t))
    }

    /// Free wave with data `(φ', φ' + χ')`.
    pub fn free_wave_shifted(&self, t: f64, x: f64) -> f64 {
        0.5 * (self.phi.derivative(x + t) + self.phi.derivative(x - t))
            + 0.5 * (self.phi.value(x + t) - self.phi.value(x - t))
            + 0.5 * (self.chi.value(x + t) - self.chi.value(x - t))
    }
}

/// `∫_a^b (1 − s²)^k ds` from the binomial expansion.
pub fn poly_bump_integral(k: u32, a: f64, b: f64) -> f64 {
    let a = a.clamp(-1.0, 1.0);
    let b = b.clamp(-1.0, 1.0);
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let e = 2 * j + 1;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * (b.powi(e as i32) - a.powi(e as i32)) / e as f64;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    sum
}

/// `₂F₁(a,b;c;z)` by direct series summation in double-double arithmetic.
pub fn hyp2f1_dd(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let (a, b, c, z) = (TwoFloat::from(a), TwoFloat::from(b), TwoFloat::from(c), TwoFloat::from(z));
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    for k in 0..200_000 {
        let kf = TwoFloat::from(k as f64);
        term = term * (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            break;
        }
        let rel: f64 = (term / sum).abs().into();
        if k > 10 && rel < 1e-30 {
            break;
        }
    }
    sum.into()
}

pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `x_{j+1} = shift + m x_j`, `x_0 = 0`, exactly.
pub fn exact_affine(shift: &BigRational, m: &BigRational, jmax: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(jmax + 1);
    let mut cur = BigRational::zero();
    for _ in 0..=jmax {
        out.push(cur.clone());
        cur = shift + m * &cur;
    }
    out
}

/// `Σ_{k<j} (j − k) m^k`, exactly.
pub fn exact_weighted_sum(m: &BigRational, j: usize) -> BigRational {
    let mut acc = BigRational::zero();
    let mut pw = BigRational::one();
    for k in 0..j {
        acc += &pw * BigRational::from_integer(BigInt::from(j - k));
        pw = &pw * m;
    }
    acc
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("representable")
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// The inverse of `G' = C (R+z)^{−a} G^p`: `s = log(R+z)` as a function of
/// `y = log G`, `ds/dy = exp(−(1−a)s − (p−1)y) / C`. It stays regular up to
/// any finite level of `G`.
/// The independent variable is shifted to `y − y0 >= 0`, since the solver's
/// dense output assumes a nonnegative abscissa.
struct InverseComparison {
    c: f64,
    a: f64,
    p: f64,
    y0: f64,
}

impl System<f64, Vector1<f64>> for InverseComparison {
    fn system(&self, v: f64, s: &Vector1<f64>, ds: &mut Vector1<f64>) {
        let y = self.y0 + v;
        ds[0] = (-(1.0 - self.a) * s[0] - (self.p - 1.0) * y).exp() / self.c;
    }
}

/// Integrates `G' = C (R+z)^{−a} G^p`, `G(R) = Mε`, with Dormand–Prince up
/// to `G = 1e12` and returns the `z` where that level is reached.
pub fn ode_blowup_z(m_eps: f64, c: f64, a: f64, p: f64, r: f64) -> f64 {
    let (y0, y1) = (m_eps.ln(), 1e12f64.ln());
    let span = y1 - y0;
    let sys = InverseComparison { c, a, p, y0 };
    let mut stepper = Dopri5::new(sys, 0.0, span, span / 64.0, Vector1::new((2.0 * r).ln()), 1e-12, 1e-12);
    stepper.integrate().expect("integration");
    assert!((stepper.x_out().last().unwrap() - span).abs() < 1e-9 * span);
    let s_end = stepper.y_out().last().unwrap()[0];
    s_end.exp() - r
}
