//! Space-time grids and sampled solution fields.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};

/// Uniform grid on `[0, t_max] × [−x_max, x_max]` with `dt = cfl · dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dx: f64,
    pub cfl: f64,
    pub x_max: f64,
    pub t_max: f64,
}

impl GridSpec {
    pub fn new(dx: f64, cfl: f64, x_max: f64, t_max: f64) -> Result<Self> {
        let g = Self { dx, cfl, x_max, t_max };
        g.validate()?;
        Ok(g)
    }

    /// Smallest symmetric grid holding the light cone of data supported in
    /// `[−R, R]` up to `t_max`, with a margin of a few cells.
    pub fn covering(dx: f64, cfl: f64, radius: f64, t_max: f64) -> Result<Self> {
        Self::new(dx, cfl, radius + t_max + 4.0 * dx, t_max)
    }

    pub fn validate(&self) -> Result<()> {
        positive("dx", self.dx)?;
        positive("x_max", self.x_max)?;
        positive("t_max", self.t_max)?;
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "cfl",
                value: self.cfl,
                reason: "must lie in (0, 1]",
            });
        }
        Ok(())
    }

    /// Checks `x_max >= R + t_max`, so the light cone never meets the boundary.
    pub fn check_contains_cone(&self, radius: f64) -> Result<()> {
        if self.x_max < radius + self.t_max {
            return Err(Error::Config(format!(
                "x_max = {} is smaller than R + t_max = {}",
                self.x_max,
                radius + self.t_max
            )));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.cfl * self.dx
    }

    /// Number of spatial cells on each side of the origin.
    pub fn half_cells(&self) -> usize {
        (self.x_max / self.dx).round() as usize
    }

    pub fn nx(&self) -> usize {
        2 * self.half_cells() + 1
    }

    /// Number of time steps needed to reach `t_max`.
    pub fn nt(&self) -> usize {
        (self.t_max / self.dt() - 1e-9).ceil().max(0.0) as usize
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.half_cells() as f64) * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx()).map(|i| self.x(i)).collect()
    }

    /// Same grid with `dx` halved.
    pub fn refined(&self) -> Self {
        Self {
            dx: 0.5 * self.dx,
            ..*self
        }
    }
}

/// Solution values `u` and `∂_t u` on a set of time levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeField {
    pub grid: GridSpec,
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    /// `values[k][i] = u(times[k], xs[i])`.
    pub values: Vec<Vec<f64>>,
    pub dvalues: Vec<Vec<f64>>,
}

impl SpacetimeField {
    pub fn new(grid: GridSpec, times: Vec<f64>, xs: Vec<f64>, values: Vec<Vec<f64>>, dvalues: Vec<Vec<f64>>) -> Result<Self> {
        let shape_ok = values.len() == times.len()
            && dvalues.len() == times.len()
            && values.iter().chain(dvalues.iter()).all(|row| row.len() == xs.len());
        if !shape_ok {
            return Err(Error::Config("field arrays do not match the time and space axes".into()));
        }
        if values.iter().chain(dvalues.iter()).flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("field contains non-finite values".into()));
        }
        Ok(Self {
            grid,
            times,
            xs,
            values,
            dvalues,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Last stored time.
    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Bilinear interpolation of `u` at `(t, x)`; `None` outside the field.
    pub fn interpolate(&self, t: f64, x: f64) -> Option<f64> {
        let k = bracket(&self.times, t)?;
        let i = bracket(&self.xs, x)?;
        let (t0, t1) = (self.times[k], self.times[(k + 1).min(self.times.len() - 1)]);
        let (x0, x1) = (self.xs[i], self.xs[(i + 1).min(self.xs.len() - 1)]);
        let wt = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
        let wx = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        let k1 = (k + 1).min(self.times.len() - 1);
        let i1 = (i + 1).min(self.xs.len() - 1);
        let v = &self.values;
        Some(
            (1.0 - wt) * ((1.0 - wx) * v[k][i] + wx * v[k][i1])
                + wt * ((1.0 - wx) * v[k1][i] + wx * v[k1][i1]),
        )
    }

    /// Writes the CSV layout `t,x,u,ut` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,x,u,ut")?;
        for (k, &t) in self.times.iter().enumerate() {
            for (i, &x) in self.xs.iter().enumerate() {
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e}",
                    t, x, self.values[k][i], self.dvalues[k][i]
                )?;
            }
        }
        Ok(())
    }
}

/// Index `k` with `axis[k] <= v <= axis[k+1]`, tolerating rounding at the ends.
fn bracket(axis: &[f64], v: f64) -> Option<usize> {
    let n = axis.len();
    if n == 0 || !v.is_finite() {
        return None;
    }
    let slack = 1e-12 * (1.0 + v.abs());
    if v < axis[0] - slack || v > axis[n - 1] + slack {
        return None;
    }
    if n == 1 {
        return Some(0);
    }
    let k = axis.partition_point(|&a| a <= v);
    Some(k.saturating_sub(1).min(n - 2))
}
