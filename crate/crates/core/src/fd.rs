//! Finite-difference solver for the one-dimensional problems
//!
//! ```text
//! u_tt − u_xx + μ/(1+t) u_t + ν²/(1+t)² u = N(t,x)
//! ```
//!
//! with `N = |∂_t u|^p`, a prescribed source, or (for the weakly coupled
//! system) the cross terms `|∂_t v|^p`, `|∂_t u|^q`.
//!
//! The scheme is the three-level centered update: three-point stencils for
//! `u_tt` and `u_xx`, the damping term with the centered difference
//! `(u^{k+1} − u^{k−1})/(2dt)` solved for `u^{k+1}` in closed form, the mass
//! term and the forcing at level `k`. The nonlinearity uses the second-order
//! backward estimate `(3u^k − 4u^{k−1} + u^{k−2})/(2dt)` of `u_t` at level `k`,
//! which needs no value from the unknown level. The first step is a Taylor
//! start.

use std::io::Write;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{GridSpec, SpacetimeField};
use crate::params::{ScaleInvariantParams, SystemParams};
use crate::profile::{CauchyProfile, SourceTerm};

/// Default blow-up threshold on `max |∂_t u|`.
pub const DEFAULT_THRESHOLD: f64 = 1e8;

/// Relative tolerance between coarse and refined lifespans for a run to count
/// as converged.
pub const CONVERGENCE_BAND: f64 = 0.05;

/// Extra cells kept active beyond the physical light cone. For `cfl < 1`
/// the centered scheme spreads a spurious precursor faster than the waves;
/// outside this window the discrete solution is set to zero, so no node
/// beyond `R + t + 2dx` is ever nonzero.
const CONE_MARGIN_CELLS: f64 = 1.0;

/// Right-hand side of the single equation.
#[derive(Debug, Clone)]
pub enum Forcing {
    None,
    /// `|∂_t u|^p`.
    Power { p: f64 },
    /// Prescribed `f(t, x)`.
    Source(SourceTerm),
}

/// `|v|^p` with fast paths for the common exponents.
#[inline]
pub(crate) fn abs_pow(v: f64, p: f64) -> f64 {
    let a = v.abs();
    if p == 2.0 {
        a * a
    } else if p == 1.5 {
        a * a.sqrt()
    } else if p == 3.0 {
        a * a * a
    } else {
        a.powf(p)
    }
}

/// Taylor start
/// `u¹ = u⁰ + dt u_t⁰ + dt²/2 (D_xx u⁰ − μ u_t⁰ − ν² u⁰ + N⁰)`.
pub fn taylor_start(params: &ScaleInvariantParams, grid: &GridSpec, u0: &[f64], ut0: &[f64], rhs0: &[f64]) -> Vec<f64> {
    let n = u0.len();
    let dt = grid.dt();
    let inv_dx2 = 1.0 / (grid.dx * grid.dx);
    let mut out = vec![0.0; n];
    for i in 1..n.saturating_sub(1) {
        let lap = (u0[i + 1] - 2.0 * u0[i] + u0[i - 1]) * inv_dx2;
        let utt = lap - params.mu() * ut0[i] - params.nu2() * u0[i] + rhs0[i];
        out[i] = u0[i] + dt * ut0[i] + 0.5 * dt * dt * utt;
    }
    out
}

/// One step of the centered scheme from levels `k−1` (`prev`) and `k`
/// (`cur`) at time `t_k`, with forcing `rhs` at level `k`. Nodes outside
/// `window` (and the two boundary nodes) are set to zero.
pub fn step_semilinear(
    params: &ScaleInvariantParams,
    grid: &GridSpec,
    t_k: f64,
    prev: &[f64],
    cur: &[f64],
    rhs: &[f64],
    window: Range<usize>,
) -> Vec<f64> {
    let n = cur.len();
    let mut next = vec![0.0; n];
    step_into(params, grid, t_k, prev, cur, rhs, window, &mut next);
    next
}

#[allow(clippy::too_many_arguments)]
fn step_into(
    params: &ScaleInvariantParams,
    grid: &GridSpec,
    t_k: f64,
    prev: &[f64],
    cur: &[f64],
    rhs: &[f64],
    window: Range<usize>,
    next: &mut [f64],
) {
    let n = cur.len();
    let dt = grid.dt();
    let dt2 = dt * dt;
    let inv_dx2 = 1.0 / (grid.dx * grid.dx);
    let c = params.mu() / (1.0 + t_k);
    let mass = params.nu2() / ((1.0 + t_k) * (1.0 + t_k));
    let plus = 1.0 / (1.0 + 0.5 * c * dt);
    let minus = 1.0 - 0.5 * c * dt;
    let lo = window.start.max(1);
    let hi = window.end.min(n.saturating_sub(1));
    next.iter_mut().for_each(|v| *v = 0.0);
    for i in lo..hi {
        let lap = (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]) * inv_dx2;
        let l = lap - mass * cur[i] + rhs[i];
        next[i] = (dt2 * l + 2.0 * cur[i] - minus * prev[i]) * plus;
    }
}

/// State of one component of a run.
#[derive(Debug, Clone)]
struct Component {
    params: ScaleInvariantParams,
    prev2: Vec<f64>,
    prev: Vec<f64>,
    cur: Vec<f64>,
    /// `∂_t u` estimate at the current level.
    ut: Vec<f64>,
    /// Radius outside which the initial data vanish.
    radius: f64,
}

/// Forcing evaluated per node: `(component, t, node, ut of all components)`.
type NodeForcing<'a> = dyn Fn(usize, f64, usize, &[&[f64]]) -> f64 + Sync + 'a;

/// Outcome of a time-stepping run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub blow_up: bool,
    /// Time of the level at which the threshold was exceeded, or the last time reached.
    pub t_end: f64,
    pub steps: usize,
    /// Largest `|∂_t u|` seen on a finite level.
    pub max_ut: f64,
    /// Index of the component that tripped the threshold.
    pub tripped: Option<usize>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| if x.is_finite() { m.max(x.abs()) } else { f64::INFINITY })
}

struct Driver<'a> {
    grid: GridSpec,
    comps: Vec<Component>,
    forcing: &'a NodeForcing<'a>,
    /// Half-width of the region beyond `[−R − t, R + t]` where forcing may be nonzero.
    forcing_reach: Option<f64>,
    threshold: f64,
}

impl<'a> Driver<'a> {
    fn window(&self, step: usize) -> Range<usize> {
        let n = self.grid.nx();
        let Some(reach) = self.forcing_reach else {
            return 0..n;
        };
        let dx = self.grid.dx;
        let radius = self.comps.iter().fold(reach, |m, c| m.max(c.radius));
        let t = step as f64 * self.grid.dt();
        // Numerical domain of dependence grows one cell per step.
        let numerical = radius + (step as f64 + 1.0) * dx;
        let physical = radius + t + CONE_MARGIN_CELLS * dx;
        let half = numerical.min(physical);
        let center = self.grid.half_cells() as f64;
        let lo = (center - half / dx).floor().max(0.0) as usize;
        let hi = ((center + half / dx).ceil() as usize + 1).min(n);
        lo..hi
    }

    fn rhs(&self, t: f64, window: &Range<usize>) -> Vec<Vec<f64>> {
        let n = self.grid.nx();
        let uts: Vec<&[f64]> = self.comps.iter().map(|c| c.ut.as_slice()).collect();
        (0..self.comps.len())
            .map(|j| {
                let mut r = vec![0.0; n];
                for i in window.clone() {
                    r[i] = (self.forcing)(j, t, i, &uts);
                }
                r
            })
            .collect()
    }

    fn check(&self, step: usize, t: f64, max_seen: &mut f64) -> Option<RunOutcome> {
        let w = self.window(step);
        for (j, c) in self.comps.iter().enumerate() {
            let mu = max_abs(&c.ut[w.clone()]);
            let m = mu.max(max_abs(&c.cur[w.clone()]));
            if !m.is_finite() || mu > self.threshold {
                return Some(RunOutcome {
                    blow_up: true,
                    t_end: t,
                    steps: step,
                    max_ut: *max_seen,
                    tripped: Some(j),
                });
            }
            *max_seen = max_seen.max(mu);
        }
        None
    }

    /// Runs to `t_max` or blow-up, calling `observe(step, t, comps)` after
    /// every finite level.
    fn run(&mut self, mut observe: impl FnMut(usize, f64, &[Component])) -> RunOutcome {
        let dt = self.grid.dt();
        let nt = self.grid.nt();
        let mut max_seen = 0.0;
        if let Some(out) = self.check(0, 0.0, &mut max_seen) {
            return out;
        }
        observe(0, 0.0, &self.comps);
        if nt == 0 {
            return RunOutcome {
                blow_up: false,
                t_end: 0.0,
                steps: 0,
                max_ut: max_seen,
                tripped: None,
            };
        }
        // Level 1 by Taylor expansion.
        let w0 = self.window(0);
        let rhs0 = self.rhs(0.0, &w0);
        for (j, c) in self.comps.iter_mut().enumerate() {
            let u1 = taylor_start(&c.params, &self.grid, &c.cur, &c.ut, &rhs0[j]);
            let ut1: Vec<f64> = (0..u1.len()).map(|i| 2.0 * (u1[i] - c.cur[i]) / dt - c.ut[i]).collect();
            c.prev2 = std::mem::take(&mut c.prev);
            c.prev = std::mem::replace(&mut c.cur, u1);
            c.ut = ut1;
        }
        let mut t = dt;
        if let Some(out) = self.check(1, t, &mut max_seen) {
            return out;
        }
        observe(1, t, &self.comps);
        let n = self.grid.nx();
        let mut scratch = vec![0.0; n];
        for step in 1..nt {
            let w = self.window(step + 1);
            let rhs = self.rhs(t, &w);
            for (j, c) in self.comps.iter_mut().enumerate() {
                step_into(&c.params, &self.grid, t, &c.prev, &c.cur, &rhs[j], w.clone(), &mut scratch);
                // Rotate levels: prev2 <- prev <- cur <- next.
                std::mem::swap(&mut c.prev2, &mut c.prev);
                std::mem::swap(&mut c.prev, &mut c.cur);
                std::mem::swap(&mut c.cur, &mut scratch);
                let inv = 1.0 / (2.0 * dt);
                // Outside the window all three levels vanish, so `ut` stays zero there.
                for i in w.clone() {
                    c.ut[i] = (3.0 * c.cur[i] - 4.0 * c.prev[i] + c.prev2[i]) * inv;
                }
            }
            t = ((step + 1) as f64 * dt).min(self.grid.t_max);
            if let Some(out) = self.check(step + 1, t, &mut max_seen) {
                return out;
            }
            observe(step + 1, t, &self.comps);
        }
        RunOutcome {
            blow_up: false,
            t_end: t,
            steps: nt,
            max_ut: max_seen,
            tripped: None,
        }
    }
}

fn initial_component(params: ScaleInvariantParams, grid: &GridSpec, data: &CauchyProfile) -> Component {
    let xs = grid.xs();
    let n = xs.len();
    let mut cur: Vec<f64> = xs.iter().map(|&x| data.initial_u(x)).collect();
    let mut ut: Vec<f64> = xs.iter().map(|&x| data.initial_ut(x)).collect();
    for v in [&mut cur, &mut ut] {
        v[0] = 0.0;
        v[n - 1] = 0.0;
    }
    Component {
        params,
        prev2: vec![0.0; n],
        prev: vec![0.0; n],
        cur,
        ut,
        radius: data.radius,
    }
}

fn source_reach(src: &SourceTerm) -> Option<f64> {
    src.support_hint.map(|h| h.x_min.abs().max(h.x_max.abs()))
}

fn single_driver<'a>(
    params: &ScaleInvariantParams,
    data: &CauchyProfile,
    forcing: &Forcing,
    grid: &GridSpec,
    threshold: f64,
    node: &'a NodeForcing<'a>,
) -> Result<Driver<'a>> {
    grid.validate()?;
    grid.check_contains_cone(data.radius)?;
    let reach = match forcing {
        Forcing::None | Forcing::Power { .. } => Some(0.0),
        Forcing::Source(src) => source_reach(src),
    };
    Ok(Driver {
        grid: *grid,
        comps: vec![initial_component(*params, grid, data)],
        forcing: node,
        forcing_reach: reach,
        threshold,
    })
}

fn node_forcing(forcing: &Forcing, xs: Vec<f64>) -> Box<NodeForcing<'_>> {
    match forcing {
        Forcing::None => Box::new(|_, _, _, _| 0.0),
        Forcing::Power { p } => {
            let p = *p;
            Box::new(move |j, _, i, uts| abs_pow(uts[j][i], p))
        }
        Forcing::Source(src) => Box::new(move |_, t, i, _| src.eval(t, xs[i])),
    }
}

fn check_power(forcing: &Forcing) -> Result<()> {
    if let Forcing::Power { p } = forcing {
        if !(p.is_finite() && *p > 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: *p,
                reason: "nonlinearity exponent must exceed 1",
            });
        }
    }
    Ok(())
}

/// Runs the single equation and stores every `store_every`-th level (and
/// the last finite one) as a field.
pub fn solve_semilinear_field(
    params: &ScaleInvariantParams,
    data: &CauchyProfile,
    forcing: &Forcing,
    grid: &GridSpec,
    store_every: usize,
) -> Result<(SpacetimeField, RunOutcome)> {
    check_power(forcing)?;
    let every = store_every.max(1);
    let node = node_forcing(forcing, grid.xs());
    let mut driver = single_driver(params, data, forcing, grid, f64::INFINITY, node.as_ref())?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut dvalues = Vec::new();
    let mut last: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let outcome = driver.run(|step, t, comps| {
        if step % every == 0 {
            times.push(t);
            values.push(comps[0].cur.clone());
            dvalues.push(comps[0].ut.clone());
            last = None;
        } else {
            last = Some((t, comps[0].cur.clone(), comps[0].ut.clone()));
        }
    });
    if let Some((t, u, ut)) = last {
        times.push(t);
        values.push(u);
        dvalues.push(ut);
    }
    let field = SpacetimeField::new(*grid, times, grid.xs(), values, dvalues)?;
    Ok((field, outcome))
}

/// Runs the single equation and returns only the outcome.
pub fn run_semilinear(
    params: &ScaleInvariantParams,
    data: &CauchyProfile,
    forcing: &Forcing,
    grid: &GridSpec,
    threshold: f64,
) -> Result<RunOutcome> {
    check_power(forcing)?;
    crate::error::positive("threshold", threshold)?;
    let node = node_forcing(forcing, grid.xs());
    let mut driver = single_driver(params, data, forcing, grid, threshold, node.as_ref())?;
    Ok(driver.run(|_, _, _| {}))
}

/// Numerical lifespan of one run (or a coarse/refined pair).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifespanRecord {
    pub eps: f64,
    /// Detected blow-up time; `f64::INFINITY` marks a censored run (no
    /// blow-up up to `t_max`).
    pub t_est: f64,
    pub blow_up: bool,
    pub threshold: f64,
    pub grid: GridSpec,
    /// `(T on grid, T on grid with dx/2)` when refinement was requested.
    pub richardson: Option<(f64, f64)>,
    pub converged: bool,
}

impl LifespanRecord {
    fn from_outcome(eps: f64, out: &RunOutcome, threshold: f64, grid: &GridSpec) -> Self {
        Self {
            eps,
            t_est: if out.blow_up { out.t_end } else { f64::INFINITY },
            blow_up: out.blow_up,
            threshold,
            grid: *grid,
            richardson: None,
            converged: false,
        }
    }

    pub fn is_censored(&self) -> bool {
        !self.blow_up
    }

    /// Combines a coarse and refined run. The record carries the refined
    /// estimate; it is converged when both runs agree on blow-up within
    /// [`CONVERGENCE_BAND`] or both are censored.
    pub(crate) fn refine_with(mut self, fine: &LifespanRecord) -> Self {
        self.richardson = Some((self.t_est, fine.t_est));
        self.converged = match (self.blow_up, fine.blow_up) {
            (true, true) => (self.t_est - fine.t_est).abs() <= CONVERGENCE_BAND * fine.t_est,
            (false, false) => true,
            _ => false,
        };
        self.t_est = fine.t_est;
        self.blow_up = fine.blow_up;
        self
    }
}

/// CSV header for lifespan records.
pub const LIFESPAN_CSV_HEADER: &str = "eps,T_est,blow_up,threshold,dx,cfl,converged";

pub fn write_lifespan_csv<W: Write>(records: &[LifespanRecord], mut out: W) -> Result<()> {
    writeln!(out, "{LIFESPAN_CSV_HEADER}")?;
    for r in records {
        let t = if r.t_est.is_finite() {
            format!("{:.16e}", r.t_est)
        } else {
            "inf".to_string()
        };
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{:.16e},{:.16e},{}",
            r.eps, t, r.blow_up, r.threshold, r.grid.dx, r.grid.cfl, r.converged
        )?;
    }
    Ok(())
}

/// Integrates `u_tt − u_xx + μ/(1+t)u_t + ν²/(1+t)²u = |u_t|^p` until
/// `max |u_t| > threshold`, a non-finite value, or `t_max`.
pub fn detect_lifespan(
    params: &ScaleInvariantParams,
    data: &CauchyProfile,
    p: f64,
    grid: &GridSpec,
    threshold: f64,
) -> Result<LifespanRecord> {
    let out = run_semilinear(params, data, &Forcing::Power { p }, grid, threshold)?;
    Ok(LifespanRecord::from_outcome(data.eps, &out, threshold, grid))
}

/// [`detect_lifespan`] on `grid` and on `grid.refined()`, storing the pair.
pub fn detect_lifespan_refined(
    params: &ScaleInvariantParams,
    data: &CauchyProfile,
    p: f64,
    grid: &GridSpec,
    threshold: f64,
) -> Result<LifespanRecord> {
    let fine_grid = grid.refined();
    let (coarse, fine) = rayon::join(
        || detect_lifespan(params, data, p, grid, threshold),
        || detect_lifespan(params, data, p, &fine_grid, threshold),
    );
    Ok(coarse?.refine_with(&fine?))
}

/// Which nonlinearity drives each component of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// `u ← |v_t|^p`, `v ← |u_t|^q`.
    Cross,
    /// `u ← |u_t|^p`, `v ← |v_t|^q` (decoupled sanity mode).
    SelfOnly,
}

/// Runs the weakly coupled system; blow-up when either component trips the
/// threshold. The record's `eps` is that of the first component's data.
pub fn run_system(
    sys: &SystemParams,
    data_u: &CauchyProfile,
    data_v: &CauchyProfile,
    grid: &GridSpec,
    threshold: f64,
    coupling: Coupling,
    mut observe: impl FnMut(usize, f64, &[f64], &[f64]),
) -> Result<RunOutcome> {
    grid.validate()?;
    grid.check_contains_cone(data_u.radius.max(data_v.radius))?;
    crate::error::positive("threshold", threshold)?;
    let (p, q) = (sys.p, sys.q);
    let node = move |j: usize, _t: f64, i: usize, uts: &[&[f64]]| -> f64 {
        match (j, coupling) {
            (0, Coupling::Cross) => abs_pow(uts[1][i], p),
            (1, Coupling::Cross) => abs_pow(uts[0][i], q),
            (0, Coupling::SelfOnly) => abs_pow(uts[0][i], p),
            _ => abs_pow(uts[1][i], q),
        }
    };
    let mut driver = Driver {
        grid: *grid,
        comps: vec![
            initial_component(sys.comp1, grid, data_u),
            initial_component(sys.comp2, grid, data_v),
        ],
        forcing: &node,
        forcing_reach: Some(0.0),
        threshold,
    };
    Ok(driver.run(|step, t, comps| observe(step, t, &comps[0].cur, &comps[1].cur)))
}

pub fn detect_lifespan_system(
    sys: &SystemParams,
    data_u: &CauchyProfile,
    data_v: &CauchyProfile,
    grid: &GridSpec,
    threshold: f64,
    coupling: Coupling,
) -> Result<LifespanRecord> {
    let out = run_system(sys, data_u, data_v, grid, threshold, coupling, |_, _, _, _| {})?;
    Ok(LifespanRecord::from_outcome(data_u.eps, &out, threshold, grid))
}
