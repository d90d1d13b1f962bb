//! Closed-form solution of the one-dimensional linear problem
//!
//! ```text
//! u_tt − u_xx + μ/(1+t) u_t + ν²/(1+t)² u = f(t,x),   u(0) = ε u0,  u_t(0) = ε u1,
//! ```
//!
//! evaluated through the representation
//!
//! ```text
//! u(t,x) = ½(1+t)^{−μ/2}(u0(x+t) + u0(x−t))
//!        + 2^{−√δ} ∫_{x−t}^{x+t} [u0 K0 + (u1 + μ u0) K1] dy
//!        + 2^{−√δ} ∫_0^t ∫_{x−(t−b)}^{x+(t−b)} f(b,y) E(t,x;b,y) dy db.
//! ```
//!
//! Each integral is computed with adaptive Gauss–Kronrod quadrature; the
//! Duhamel term is an iterated integral, outer in `b` and inner in `y`.

use rayon::prelude::*;

use crate::error::{positive, Error, Result};
use crate::field::{GridSpec, SpacetimeField};
use crate::kernels::{kernel_e, kernel_k0_k1, KernelPoint};
use crate::params::ScaleInvariantParams;
use crate::profile::{CauchyProfile, SourceTerm};
use crate::quadrature::{integrate_with_breaks, DEFAULT_MAX_INTERVALS};

/// Default absolute quadrature tolerance.
pub const DEFAULT_QTOL: f64 = 1e-9;

/// Runs the quadrature on an integrand that may fail; the first failure wins.
fn integrate_fallible<F: FnMut(f64) -> Result<f64>>(mut f: F, breaks: &[f64], tol: f64) -> Result<f64> {
    let mut err = None;
    let r = integrate_with_breaks(
        |y| match f(y) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        breaks,
        tol,
        DEFAULT_MAX_INTERVALS,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(r?.value)
}

/// Sorted breakpoints of `[lo, hi]` including the interior `extra` points.
fn breaks_in(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut out = vec![lo];
    out.extend(extra.iter().copied().filter(|&e| e > lo && e < hi));
    out.push(hi);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// `u(t, x)` for the linear problem, with absolute quadrature tolerance `qtol`.
pub fn solve_linear_point(
    params: &ScaleInvariantParams,
    data: &CauchyProfile,
    src: &SourceTerm,
    t: f64,
    x: f64,
    qtol: f64,
) -> Result<f64> {
    crate::error::nonnegative("t", t)?;
    positive("qtol", qtol)?;
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be finite",
        });
    }
    let mu = params.mu();
    let eps = data.eps;
    let weight = params.integral_weight();

    let boundary = 0.5 * (1.0 + t).powf(-0.5 * mu) * eps * ((data.u0)(x + t) + (data.u0)(x - t));

    let mut data_term = 0.0;
    let (lo, hi) = ((x - t).max(-data.radius), (x + t).min(data.radius));
    if t > 0.0 && eps != 0.0 && hi > lo {
        let breaks = breaks_in(lo, hi, &data.breakpoints);
        data_term = integrate_fallible(
            |y| {
                let u0 = (data.u0)(y);
                let u1 = (data.u1)(y);
                if u0 == 0.0 && u1 == 0.0 {
                    return Ok(0.0);
                }
                let k = kernel_k0_k1(params, t, x, y)?;
                Ok(eps * (u0 * k.k0 + (u1 + mu * u0) * k.k1))
            },
            &breaks,
            0.25 * qtol,
        )?;
    }

    let duhamel = if src.is_zero() || t == 0.0 {
        0.0
    } else {
        duhamel_term(params, src, t, x, qtol)?
    };

    Ok(boundary + weight * (data_term + duhamel))
}

/// `∫_0^t ∫ f(b,y) E(t,x;b,y) dy db` over the backward light cone.
fn duhamel_term(params: &ScaleInvariantParams, src: &SourceTerm, t: f64, x: f64, qtol: f64) -> Result<f64> {
    let (mut b_lo, mut b_hi) = (0.0f64, t);
    let (mut y_min, mut y_max) = (f64::NEG_INFINITY, f64::INFINITY);
    if let Some(h) = src.support_hint {
        b_lo = b_lo.max(h.t_min);
        b_hi = b_hi.min(h.t_max);
        y_min = h.x_min;
        y_max = h.x_max;
        // The slice at height b meets [y_min, y_max] only while t − b >= dist(x, box).
        let dist = (y_min - x).max(x - y_max).max(0.0);
        b_hi = b_hi.min(t - dist);
    }
    if b_hi <= b_lo {
        return Ok(0.0);
    }
    // Heights where a slice endpoint crosses an edge of the support box.
    let mut kinks = Vec::new();
    for edge in [y_min, y_max] {
        if edge.is_finite() {
            kinks.push(t - (x - edge).abs());
        }
    }
    let outer_breaks = breaks_in(b_lo, b_hi, &kinks);
    let inner_tol = qtol / (2.0 * (t + 1.0));
    integrate_fallible(
        |b| {
            let half = t - b;
            let (lo, hi) = ((x - half).max(y_min), (x + half).min(y_max));
            if hi <= lo {
                return Ok(0.0);
            }
            let inner_breaks = breaks_in(lo, hi, &[y_min, y_max]);
            integrate_fallible(
                |y| {
                    let f = src.eval(b, y);
                    if f == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(f * kernel_e(params, &KernelPoint::new(t, x, b, y)?)?)
                },
                &inner_breaks,
                inner_tol,
            )
        },
        &outer_breaks,
        0.25 * qtol,
    )
}

/// Evaluates the solution on every node of `grid` (time levels `k·dt`), in
/// parallel, and fills `∂_t u` by centered differences in time (second-order
/// one-sided at the first and last level).
pub fn solve_linear_field(
    params: &ScaleInvariantParams,
    data: &CauchyProfile,
    src: &SourceTerm,
    grid: &GridSpec,
    qtol: f64,
) -> Result<SpacetimeField> {
    grid.validate()?;
    let dt = grid.dt();
    let nt = grid.nt();
    let times: Vec<f64> = (0..=nt).map(|k| (k as f64 * dt).min(grid.t_max)).collect();
    let xs = grid.xs();
    let values: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            xs.iter()
                .map(|&x| {
                    solve_linear_point(params, data, src, t, x, qtol).map_err(|e| Error::AtNode {
                        t,
                        x,
                        source: Box::new(e),
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let dvalues = time_derivative(&times, &values);
    SpacetimeField::new(*grid, times, xs, values, dvalues)
}

/// Second-order finite-difference time derivative on a (possibly nonuniform
/// final step) sequence of levels.
fn time_derivative(times: &[f64], values: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = times.len();
    let nx = values.first().map_or(0, Vec::len);
    if n < 2 {
        return vec![vec![0.0; nx]; n];
    }
    // Three-point derivative at times[c] from levels (l, m, r), Lagrange weights.
    let stencil = |c: usize, l: usize, m: usize, r: usize| -> Vec<f64> {
        let (tl, tm, tr, tc) = (times[l], times[m], times[r], times[c]);
        let wl = ((tc - tm) + (tc - tr)) / ((tl - tm) * (tl - tr));
        let wm = ((tc - tl) + (tc - tr)) / ((tm - tl) * (tm - tr));
        let wr = ((tc - tl) + (tc - tm)) / ((tr - tl) * (tr - tm));
        (0..nx)
            .map(|i| wl * values[l][i] + wm * values[m][i] + wr * values[r][i])
            .collect()
    };
    if n == 2 {
        let d: Vec<f64> = (0..nx)
            .map(|i| (values[1][i] - values[0][i]) / (times[1] - times[0]))
            .collect();
        return vec![d.clone(), d];
    }
    (0..n)
        .map(|c| match c {
            0 => stencil(0, 0, 1, 2),
            c if c == n - 1 => stencil(c, c - 2, c - 1, c),
            c => stencil(c, c - 1, c, c + 1),
        })
        .collect()
}
