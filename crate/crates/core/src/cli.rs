//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime or
//! convergence failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{resolve_output_path, run_sweep, write_sweep_svg, SweepConfig};
use crate::fd::{run_semilinear, solve_semilinear_field, Forcing, DEFAULT_THRESHOLD};
use crate::field::GridSpec;
use crate::iteration::{
    critical_sequences, cusp_sequences, divergence_threshold, lifespan_rate_system, subcritical_sequences, FrameConstants,
    IterationInput, IterationSequences,
};
use crate::kernels::{domain_sample, kernel_e, kernel_k0_k1, verify_kernel_lower_bounds, KernelPoint};
use crate::linear::{solve_linear_field, DEFAULT_QTOL};
use crate::params::{
    classify_system, cusp_exponents, fujita, glassey, predicted_lifespan_exponent, strauss, ScaleInvariantParams, SystemParams,
    DEFAULT_CRITICAL_TOL,
};
use crate::profile::{BumpFamily, CauchyProfile, SourceTerm};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "scalewave", version, about = "Blow-up and lifespan experiments for scale-invariant damped wave equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print δ, γ, σ, critical exponents, critical-curve data and lifespan rates.
    Exponents(ExponentsArgs),
    /// Tabulate E, K0, K1 and the empirical lower-bound constants.
    Kernels(KernelsArgs),
    /// Evaluate the linear solution on a grid (CSV t,x,u,ut).
    SolveLinear(SolveArgs),
    /// Run the finite-difference solver for u_tt − u_xx + ... = |u_t|^p.
    SolveSemilinear(SemilinearArgs),
    /// Run an ε-sweep described by a JSON config.
    Sweep(SweepArgs),
    /// Emit iteration sequence tables and divergence thresholds.
    Sequences(SequencesArgs),
    /// Run the built-in check suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ExponentsArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub nu2: f64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Exponent of the single equation (or of the first equation of the system).
    #[arg(long)]
    pub p: Option<f64>,
    /// Second exponent; together with --mu2/--nu2-2 switches to the system.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub mu2: Option<f64>,
    #[arg(long = "nu2-2")]
    pub nu2_2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct KernelsArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub nu2: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    /// Sample size per axis for the bound minima.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Rows per axis of the printed table.
    #[arg(long, default_value_t = 5)]
    pub table: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Smooth,
    Poly2,
    Poly4,
    Poly6,
}

impl From<FamilyArg> for BumpFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Smooth => BumpFamily::Smooth,
            FamilyArg::Poly2 => BumpFamily::Polynomial { k: 2 },
            FamilyArg::Poly4 => BumpFamily::Polynomial { k: 4 },
            FamilyArg::Poly6 => BumpFamily::Polynomial { k: 6 },
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub nu2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = FamilyArg::Smooth)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 0.05)]
    pub dx: f64,
    #[arg(long, default_value_t = 0.5)]
    pub cfl: f64,
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = DEFAULT_QTOL)]
    pub qtol: f64,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Args)]
pub struct SemilinearArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub nu2: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = FamilyArg::Smooth)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 0.01)]
    pub dx: f64,
    #[arg(long, default_value_t = 0.5)]
    pub cfl: f64,
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Write the field (every `store_every`-th level) as CSV.
    #[arg(long)]
    pub output: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub store_every: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `output_path` of the config.
    #[arg(long)]
    pub output: Option<String>,
    /// Also write a log-log SVG chart.
    #[arg(long)]
    pub svg: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SequenceMode {
    Subcritical,
    Critical,
    Cusp,
}

#[derive(Debug, Args)]
pub struct SequencesArgs {
    #[arg(long, value_enum)]
    pub mode: SequenceMode,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 0.0)]
    pub sigma1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 10)]
    pub jmax: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long = "const-c", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long = "const-k", default_value_t = 1.0)]
    pub k: f64,
    #[arg(long = "const-m", default_value_t = 1.0)]
    pub m: f64,
    #[arg(long = "const-n", default_value_t = 1.0)]
    pub n_data: f64,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidParameter { .. } | Error::NegativeDelta { .. } => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

/// Parses `argv` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the exit status.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let (code, text) = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.render().to_string()),
                _ => (EXIT_USAGE, e.render().to_string()),
            };
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(argv, &mut out, &mut err);
    let _ = out.flush();
    code
}

fn create(path: &str) -> Result<BufWriter<File>> {
    let path = resolve_output_path(path);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Exponents(a) => exponents(a, out),
        Command::Kernels(a) => kernels(a, out),
        Command::SolveLinear(a) => solve_linear(a, out),
        Command::SolveSemilinear(a) => solve_semilinear(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Sequences(a) => sequences(a, out),
        Command::Verify(a) => verify(a, out),
    }
}

fn fmt_opt(r: Result<f64>) -> String {
    r.map_or_else(|_| "undefined".to_string(), |v| format!("{v}"))
}

fn exponents(a: ExponentsArgs, out: &mut dyn Write) -> Result<i32> {
    let params = ScaleInvariantParams::new(a.mu, a.nu2)?;
    let d = a.n as f64 + params.sigma();
    writeln!(out, "delta = {}", params.delta())?;
    writeln!(out, "gamma = {}", params.gamma())?;
    writeln!(out, "sigma = {}", params.sigma())?;
    writeln!(out, "n + sigma = {d}")?;
    writeln!(out, "p_Gla({d}) = {}", fmt_opt(glassey(d)))?;
    writeln!(out, "p_Fuj({d}) = {}", fmt_opt(fujita(d)))?;
    writeln!(out, "p_Str({d}) = {}", fmt_opt(strauss(d)))?;
    if let Some(p) = a.p {
        match predicted_lifespan_exponent(a.n, &params, p) {
            Ok(pred) => writeln!(out, "lifespan(p = {p}) = {pred:?}")?,
            Err(Error::NoPrediction { .. }) => writeln!(out, "lifespan(p = {p}) = no prediction")?,
            Err(e) => return Err(e),
        }
    }
    if let (Some(mu2), Some(nu2_2)) = (a.mu2, a.nu2_2) {
        let comp2 = ScaleInvariantParams::new(mu2, nu2_2)?;
        let (s1, s2) = (params.sigma(), comp2.sigma());
        writeln!(out, "sigma2 = {s2}")?;
        match cusp_exponents(a.n, s1, s2) {
            Ok(c) => writeln!(out, "cusp = ({}, {}) admissible = {}", c.p, c.q, c.admissible)?,
            Err(e) => writeln!(out, "cusp = undefined ({e})")?,
        }
        if let (Some(p), Some(q)) = (a.p, a.q) {
            let sys = SystemParams::new(params, comp2, p, q)?;
            let rep = classify_system(a.n, &sys, DEFAULT_CRITICAL_TOL)?;
            writeln!(out, "Lambda1 = {}", rep.lambda1)?;
            writeln!(out, "Lambda2 = {}", rep.lambda2)?;
            writeln!(out, "Omega = {}", rep.omega)?;
            writeln!(out, "regime = {:?}", rep.regime)?;
            match lifespan_rate_system(a.n, &sys) {
                Ok(pred) => writeln!(out, "system lifespan = {pred:?}")?,
                Err(Error::NoPrediction { .. }) => writeln!(out, "system lifespan = no prediction")?,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(EXIT_OK)
}

fn kernels(a: KernelsArgs, out: &mut dyn Write) -> Result<i32> {
    let params = ScaleInvariantParams::new(a.mu, a.nu2)?;
    let sample = domain_sample(a.t_max, a.samples, a.samples, a.samples)?;
    let rep = verify_kernel_lower_bounds(&params, &sample)?;
    writeln!(out, "# samples = {}", rep.samples)?;
    writeln!(out, "# c_K1 = {:e}", rep.c_k1)?;
    writeln!(out, "# c_E = {:e}", rep.c_e)?;
    match rep.c_mix {
        Some(m) => writeln!(out, "# c_mix = {m:e}")?,
        None => writeln!(out, "# c_mix = not claimed (delta < 1)")?,
    }
    writeln!(out, "# min E = {:e}", rep.min_e)?;
    writeln!(out, "t,b,y,E,K0,K1")?;
    let m = a.table.max(1);
    for i in 1..=m {
        let t = a.t_max * i as f64 / m as f64;
        for j in 0..m {
            let b = t * j as f64 / m as f64;
            let half = t - b;
            for k in 0..=m {
                let y = -half + 2.0 * half * k as f64 / m as f64;
                let e = kernel_e(&params, &KernelPoint::new(t, 0.0, b, y)?)?;
                let k01 = kernel_k0_k1(&params, t, 0.0, y.clamp(-t, t))?;
                writeln!(out, "{t:.6e},{b:.6e},{y:.6e},{e:.16e},{:.16e},{:.16e}", k01.k0, k01.k1)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn solve_linear(a: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let params = ScaleInvariantParams::new(a.mu, a.nu2)?;
    let data = CauchyProfile::bump_pair(a.family.into(), a.radius, a.eps)?;
    let grid = GridSpec::covering(a.dx, a.cfl, a.radius, a.t_max)?;
    let field = solve_linear_field(&params, &data, &SourceTerm::zero(), &grid, a.qtol)?;
    match a.output {
        Some(path) => {
            let mut f = create(&path)?;
            field.write_csv(&mut f)?;
            f.flush()?;
        }
        None => field.write_csv(out)?,
    }
    Ok(EXIT_OK)
}

fn solve_semilinear(a: SemilinearArgs, out: &mut dyn Write) -> Result<i32> {
    let params = ScaleInvariantParams::new(a.mu, a.nu2)?;
    let data = CauchyProfile::bump_pair(a.family.into(), a.radius, a.eps)?;
    let grid = GridSpec::covering(a.dx, a.cfl, a.radius, a.t_max)?;
    let forcing = Forcing::Power { p: a.p };
    let outcome = match a.output {
        Some(path) => {
            let (field, outcome) = solve_semilinear_field(&params, &data, &forcing, &grid, a.store_every)?;
            let mut f = create(&path)?;
            field.write_csv(&mut f)?;
            f.flush()?;
            outcome
        }
        None => run_semilinear(&params, &data, &forcing, &grid, a.threshold)?,
    };
    writeln!(out, "blow_up = {}", outcome.blow_up)?;
    writeln!(out, "t_end = {}", outcome.t_end)?;
    writeln!(out, "steps = {}", outcome.steps)?;
    writeln!(out, "max_ut = {:e}", outcome.max_ut)?;
    Ok(EXIT_OK)
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = SweepConfig::load(&a.config)?;
    if a.output.is_some() {
        cfg.output_path = a.output;
    }
    let report = run_sweep(&cfg)?;
    writeln!(out, "# data family = {}", report.data_family)?;
    crate::fd::write_lifespan_csv(&report.records, &mut *out)?;
    match (&report.fit, report.prediction) {
        (Some(fit), _) => writeln!(
            out,
            "# fit ({:?}): slope = {:.4}, predicted = {:.4}, r2 = {:.4}, points = {}, excluded = {}, within ±{:.0}% band (exploratory) = {}",
            fit.regime,
            fit.slope,
            fit.predicted_slope,
            fit.r2,
            fit.points,
            fit.excluded,
            100.0 * fit.pass_band,
            fit.within_band()
        )?,
        (None, _) => writeln!(out, "# fit unavailable: fewer than two converged blow-up records")?,
    }
    if let Some(ub) = report.upper_bound {
        writeln!(out, "# upper bound: T <= {:.4e} eps^-{}", ub.constant, ub.rate)?;
    }
    if !report.monotonicity_violations.is_empty() {
        writeln!(out, "# monotonicity violations at rows {:?} (grid artifacts)", report.monotonicity_violations)?;
    }
    if let Some(path) = &report.output_path {
        writeln!(out, "# wrote {}", path.display())?;
    }
    if let Some(svg) = a.svg {
        let mut f = create(&svg)?;
        write_sweep_svg(&report.records, report.fit.as_ref(), &mut f)?;
        f.flush()?;
    }
    Ok(EXIT_OK)
}

fn sequences(a: SequencesArgs, out: &mut dyn Write) -> Result<i32> {
    let input = IterationInput {
        n: a.n,
        sigma1: a.sigma1,
        sigma2: a.sigma2,
        p: a.p,
        q: a.q,
        constants: FrameConstants {
            c: a.c,
            k: a.k,
            m: a.m,
            n: a.n_data,
        },
        eps: a.eps,
    };
    let seq = match a.mode {
        SequenceMode::Subcritical => IterationSequences::Subcritical(subcritical_sequences(&input, a.jmax)?),
        SequenceMode::Critical => IterationSequences::Critical(critical_sequences(&input, a.jmax)?),
        SequenceMode::Cusp => IterationSequences::Cusp(cusp_sequences(&input, a.jmax)?),
    };
    match &a.output {
        Some(path) => {
            let mut f = create(path)?;
            seq.write_csv(&mut f)?;
            f.flush()?;
        }
        None => seq.write_csv(&mut *out)?,
    }
    if !seq.regime_matches() {
        writeln!(out, "# warning: parameters are off the branch this mode models (raw sequences)")?;
    }
    match divergence_threshold(&seq, a.radius, a.radius) {
        Ok(v) => writeln!(out, "# divergence threshold: {:?} > {:e} (ln = {:.6e})", v.variable, v.threshold, v.log_threshold)?,
        Err(e) => writeln!(out, "# divergence threshold unavailable: {e}")?,
    }
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let mut ok = true;
    for s in suites {
        let rep = run_suite(s)?;
        write!(out, "{rep}")?;
        ok &= rep.passed();
    }
    Ok(if ok { EXIT_OK } else { EXIT_RUNTIME })
}
