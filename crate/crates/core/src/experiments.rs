//! ε-sweeps of numerical lifespans and scaling-law fits.
//!
//! A [`SweepConfig`] is a JSON file whose keys mirror the struct fields:
//!
//! ```json
//! {
//!   "model": "single",
//!   "params": { "mu": 2.0, "nu2": 0.0 },
//!   "n": 1,
//!   "p": 1.5,
//!   "data": { "family": "smooth", "radius": 1.0 },
//!   "eps_grid": [1.0, 0.5, 0.25],
//!   "grid": { "dx": 0.01, "cfl": 0.5, "t_max": 80.0 },
//!   "threshold": 1e8,
//!   "refine": true,
//!   "output_path": "lifespans.csv"
//! }
//! ```

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::fd::{detect_lifespan, detect_lifespan_refined, detect_lifespan_system, write_lifespan_csv, Coupling, LifespanRecord};
use crate::field::GridSpec;
use crate::iteration::{lifespan_rate_system, SystemLifespanPrediction};
use crate::params::{predicted_lifespan_exponent, LifespanPrediction, ScaleInvariantParams, SystemParams};
use crate::profile::{BumpFamily, CauchyProfile};

/// Environment variable naming the directory for relative output paths.
pub const OUT_DIR_ENV: &str = "SCALEWAVE_OUT_DIR";

/// Relative band within which a fitted slope counts as agreeing with the
/// predicted one. The predictions are upper bounds, so this is a convention.
pub const DEFAULT_PASS_BAND: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Single,
    System,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelParams {
    System {
        comp1: ScaleInvariantParams,
        comp2: ScaleInvariantParams,
    },
    Single(ScaleInvariantParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataConfig {
    #[serde(flatten)]
    pub family: BumpFamily,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub dx: f64,
    pub cfl: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: Model,
    pub params: ModelParams,
    pub n: u32,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub data: DataConfig,
    pub eps_grid: Vec<f64>,
    pub grid: GridConfig,
    pub threshold: f64,
    pub refine: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

/// `n` geometric values from `start` down by `ratio` each step.
pub fn geometric_grid(start: f64, ratio: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| start * ratio.powi(k as i32)).collect()
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |msg: String| Err(Error::Config(msg));
        if self.eps_grid.is_empty() {
            return cfg("eps_grid is empty".into());
        }
        if let Some(e) = self.eps_grid.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return cfg(format!("eps_grid entry {e} is not a positive number"));
        }
        if self.eps_grid.windows(2).any(|w| w[1] >= w[0]) {
            return cfg("eps_grid must be strictly decreasing".into());
        }
        if self.n != 1 {
            return cfg(format!("finite-difference sweeps run in one space dimension, got n = {}", self.n));
        }
        match (self.model, &self.params, self.q) {
            (Model::Single, ModelParams::Single(_), _) => {}
            (Model::System, ModelParams::System { .. }, Some(_)) => {}
            (Model::System, ModelParams::System { .. }, None) => return cfg("system model needs q".into()),
            (m, _, _) => return cfg(format!("params do not match model {m:?}")),
        }
        if !(self.p.is_finite() && self.p > 1.0) {
            return cfg(format!("p = {} must exceed 1", self.p));
        }
        if let Some(q) = self.q {
            if !(q.is_finite() && q > 1.0) {
                return cfg(format!("q = {q} must exceed 1"));
            }
        }
        positive("threshold", self.threshold)?;
        positive("radius", self.data.radius)?;
        self.grid_spec()?;
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::covering(self.grid.dx, self.grid.cfl, self.data.radius, self.grid.t_max)
    }

    pub fn system_params(&self) -> Result<Option<SystemParams>> {
        match self.params {
            ModelParams::System { comp1, comp2 } => {
                let q = self.q.ok_or_else(|| Error::Config("system model needs q".into()))?;
                Ok(Some(SystemParams::new(comp1, comp2, self.p, q)?))
            }
            ModelParams::Single(_) => Ok(None),
        }
    }

    /// Predicted form of the lifespan bound, `None` outside the blow-up range.
    pub fn prediction(&self) -> Result<Option<LifespanPrediction>> {
        let pred = match self.params {
            ModelParams::Single(params) => predicted_lifespan_exponent(self.n, &params, self.p),
            ModelParams::System { .. } => {
                let sys = self.system_params()?.expect("system params");
                lifespan_rate_system(self.n, &sys).map(|s| match s {
                    SystemLifespanPrediction::Algebraic { rate } => LifespanPrediction::Algebraic { rate },
                    SystemLifespanPrediction::Exponential { rate } => LifespanPrediction::Exponential { rate },
                })
            }
        };
        match pred {
            Ok(p) => Ok(Some(p)),
            Err(Error::NoPrediction { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Resolves `path` against [`OUT_DIR_ENV`] when it is relative and the
/// variable is set.
pub fn resolve_output_path(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_relative() {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
            return PathBuf::from(dir).join(p);
        }
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitRegime {
    /// `log T` against `log ε`.
    Algebraic,
    /// `log log T` against `log ε`.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// `−rate` of the prediction, NaN when there is none.
    pub predicted_slope: f64,
    pub regime: FitRegime,
    pub pass_band: f64,
    /// Records left out: unconverged, censored, or `T <= 1` in the
    /// exponential regime.
    pub excluded: usize,
    pub points: usize,
}

impl ScalingFit {
    pub fn relative_deviation(&self) -> f64 {
        ((self.slope - self.predicted_slope) / self.predicted_slope).abs()
    }

    pub fn within_band(&self) -> bool {
        self.relative_deviation() <= self.pass_band
    }
}

/// Least-squares line `y = slope·x + intercept` with its `R²`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some((slope, intercept, r2))
}

/// Fits the records that are converged and uncensored. Returns `None` when
/// fewer than two remain.
pub fn fit_scaling(records: &[LifespanRecord], prediction: Option<LifespanPrediction>) -> Option<ScalingFit> {
    let regime = match prediction {
        Some(LifespanPrediction::Exponential { .. }) => FitRegime::Exponential,
        _ => FitRegime::Algebraic,
    };
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for r in records {
        if !r.converged || r.is_censored() {
            continue;
        }
        match regime {
            FitRegime::Algebraic if r.t_est > 0.0 => {
                xs.push(r.eps.ln());
                ys.push(r.t_est.ln());
            }
            FitRegime::Exponential if r.t_est > 1.0 => {
                xs.push(r.eps.ln());
                ys.push(r.t_est.ln().ln());
            }
            _ => {}
        }
    }
    let (slope, intercept, r2) = linear_fit(&xs, &ys)?;
    Some(ScalingFit {
        slope,
        intercept,
        r2,
        predicted_slope: prediction.map_or(f64::NAN, |p| -p.rate()),
        regime,
        pass_band: DEFAULT_PASS_BAND,
        excluded: records.len() - xs.len(),
        points: xs.len(),
    })
}

/// Smallest `C` with `T <= C ε^{−rate}` (or `log T <= C ε^{−rate}`) on every
/// converged blow-up record, together with the spread of the ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundCheck {
    pub rate: f64,
    pub constant: f64,
    pub min_ratio: f64,
}

pub fn upper_bound_constant(records: &[LifespanRecord], prediction: LifespanPrediction) -> Option<UpperBoundCheck> {
    let rate = prediction.rate();
    let ratios: Vec<f64> = records
        .iter()
        .filter(|r| r.converged && !r.is_censored())
        .map(|r| {
            let lhs = if prediction.is_exponential() { r.t_est.ln() } else { r.t_est };
            lhs * r.eps.powf(rate)
        })
        .collect();
    if ratios.is_empty() {
        return None;
    }
    Some(UpperBoundCheck {
        rate,
        constant: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// Indices `i` (in record order, ε decreasing) where a smaller ε produced a
/// shorter lifespan than the previous blow-up record.
pub fn monotonicity_violations(records: &[LifespanRecord]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (i, r) in records.iter().enumerate() {
        if let Some((pe, pt)) = prev {
            if r.eps < pe && r.t_est < pt {
                out.push(i);
            }
        }
        prev = Some((r.eps, r.t_est));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<LifespanRecord>,
    pub prediction: Option<LifespanPrediction>,
    pub fit: Option<ScalingFit>,
    pub upper_bound: Option<UpperBoundCheck>,
    pub monotonicity_violations: Vec<usize>,
    pub data_family: String,
    pub output_path: Option<PathBuf>,
}

impl SweepReport {
    pub fn all_blow_up(&self) -> bool {
        self.records.iter().all(|r| r.blow_up)
    }
}

fn run_one(cfg: &SweepConfig, grid: &GridSpec, eps: f64) -> Result<LifespanRecord> {
    let data = CauchyProfile::bump_pair(cfg.data.family, cfg.data.radius, eps)?;
    match cfg.params {
        ModelParams::Single(params) => {
            if cfg.refine {
                detect_lifespan_refined(&params, &data, cfg.p, grid, cfg.threshold)
            } else {
                detect_lifespan(&params, &data, cfg.p, grid, cfg.threshold)
            }
        }
        ModelParams::System { .. } => {
            let sys = cfg.system_params()?.expect("system params");
            let run = |g: &GridSpec| detect_lifespan_system(&sys, &data, &data, g, cfg.threshold, Coupling::Cross);
            if cfg.refine {
                let fine_grid = grid.refined();
                let (coarse, fine) = rayon::join(|| run(grid), || run(&fine_grid));
                Ok(coarse?.refine_with(&fine?))
            } else {
                run(grid)
            }
        }
    }
}

/// Runs every ε concurrently, fits the scaling law and writes the CSV to
/// `output_path` when one is configured.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let grid = cfg.grid_spec()?;
    let records = cfg
        .eps_grid
        .par_iter()
        .map(|&eps| run_one(cfg, &grid, eps))
        .collect::<Result<Vec<_>>>()?;
    let prediction = cfg.prediction()?;
    let fit = fit_scaling(&records, prediction);
    let upper_bound = prediction.and_then(|p| upper_bound_constant(&records, p));
    let output_path = match &cfg.output_path {
        Some(path) => {
            let path = resolve_output_path(path);
            let mut out = BufWriter::new(File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?);
            write_lifespan_csv(&records, &mut out)?;
            out.flush()?;
            Some(path)
        }
        None => None,
    };
    Ok(SweepReport {
        monotonicity_violations: monotonicity_violations(&records),
        records,
        prediction,
        fit,
        upper_bound,
        data_family: cfg.data.family.to_string(),
        output_path,
    })
}

/// Log-log scatter of the blow-up records with the fitted line.
pub fn write_sweep_svg<W: Write>(records: &[LifespanRecord], fit: Option<&ScalingFit>, mut out: W) -> Result<()> {
    const W: f64 = 480.0;
    const H: f64 = 360.0;
    const PAD: f64 = 40.0;
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.blow_up && r.t_est > 0.0)
        .map(|r| (r.eps.ln(), r.t_est.ln()))
        .collect();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">"#)?;
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#)?;
    if !pts.is_empty() {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x1 - x0 < 1e-12 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-12 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12">log eps</text><text x="4" y="{}" font-size="12">log T</text>"#,
            W / 2.0,
            H - 8.0,
            PAD - 10.0
        )?;
        for &(x, y) in &pts {
            writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#, sx(x), sy(y))?;
        }
        if let Some(f) = fit.filter(|f| f.regime == FitRegime::Algebraic) {
            let (ya, yb) = (f.slope * x0 + f.intercept, f.slope * x1 + f.intercept);
            writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue"/>"#,
                sx(x0),
                sy(ya),
                sx(x1),
                sy(yb)
            )?;
        }
    }
    writeln!(out, "</svg>")?;
    Ok(())
}
