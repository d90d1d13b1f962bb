//! Gauss hypergeometric function `₂F₁(a,b;c;z)` for `0 <= z < 1`.
//!
//! The series is summed directly with Neumaier compensation. Truncation is
//! controlled by a rigorous bound on the remaining tail: for `j >= k` the term
//! ratio satisfies
//!
//! ```text
//! |(a+j)(b+j) / ((c+j)(j+1))| · z <= ρ_k = z (1 + m₁/(k+1)) (1 + m₂/(c+k)),
//! m₁ = max(|a−1|, |b−1|),  m₂ = max(|a−c|, |b−c|),
//! ```
//!
//! so once `ρ_k < 1` the tail after term `t_k` is at most `|t_k| ρ_k/(1−ρ_k)`.
//! No transformation is applied near `z = 1`; the cost grows like
//! `log(tol (1−z)) / log z` terms and the iteration budget turns an
//! excessive count into [`Error::NonConvergence`]. The bound is symmetric in
//! `a` and `b`, and so is the summation order, which makes the result
//! bit-identical under `a ↔ b`.

use crate::error::{Error, Result};

/// Default absolute truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-13;

/// Maximum number of series terms before reporting non-convergence.
pub const MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomQuery {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
    pub tol: f64,
}

impl HypergeomQuery {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self {
            a,
            b,
            c,
            z,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite",
                });
            }
        }
        if self.c <= 0.0 && self.c == self.c.round() {
            return Err(Error::HypergeometricPole { c: self.c });
        }
        if !(self.z >= 0.0 && self.z < 1.0) {
            return Err(Error::InvalidParameter {
                name: "z",
                value: self.z,
                reason: "argument must lie in [0, 1)",
            });
        }
        crate::error::positive("tol", self.tol)?;
        Ok(())
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn new(init: f64) -> Self {
        Self { sum: init, comp: 0.0 }
    }

    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Evaluates `₂F₁(a,b;c;z)` to absolute tolerance `query.tol`.
pub fn hyp2f1(query: &HypergeomQuery) -> Result<f64> {
    query.validate()?;
    let HypergeomQuery { a, b, c, z, tol } = *query;
    if z == 0.0 {
        return Ok(1.0);
    }
    let m1 = (a - 1.0).abs().max((b - 1.0).abs());
    let m2 = (a - c).abs().max((b - c).abs());

    let mut sum = CompensatedSum::new(1.0);
    let mut term = 1.0f64;
    let mut tail = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        if term == 0.0 {
            // a or b is a nonpositive integer: the series terminated.
            return Ok(sum.value());
        }
        sum.add(term);
        // `term` is t_{k+1}; bound the ratios t_{j+1}/t_j for j >= k+1.
        let next = kf + 1.0;
        if c + next > 0.0 {
            let rho = z * (1.0 + m1 / (next + 1.0)) * (1.0 + m2 / (c + next));
            if rho < 1.0 {
                tail = term.abs() * rho / (1.0 - rho);
                if tail < tol {
                    return Ok(sum.value());
                }
            }
        }
    }
    Err(Error::NonConvergence {
        terms: MAX_TERMS,
        tail,
    })
}

/// Convenience wrapper with the default tolerance.
pub fn hyp2f1_default(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    hyp2f1(&HypergeomQuery::new(a, b, c, z))
}

/// Checks `F(a,a;c;z) >= 1 − tol` on every grid point.
pub fn hyp2f1_lower_bound_check(a: f64, c: f64, zgrid: &[f64]) -> Result<bool> {
    crate::error::positive("c", c)?;
    let mut ok = true;
    for &z in zgrid {
        let q = HypergeomQuery::new(a, a, c, z);
        if hyp2f1(&q)? < 1.0 - q.tol {
            ok = false;
        }
    }
    Ok(ok)
}
