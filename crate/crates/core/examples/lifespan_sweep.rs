//! A lifespan sweep driven by a JSON config: CSV records, the log-log fit
//! against the predicted rate and an SVG chart.
//!
//! Run with `cargo run --release --example lifespan_sweep [out_dir]`.

use std::fs::File;
use std::path::PathBuf;

use scalewave::experiments::{run_sweep, write_sweep_svg, DataConfig, GridConfig, Model, ModelParams, SweepConfig};
use scalewave::fd::DEFAULT_THRESHOLD;
use scalewave::profile::BumpFamily;
use scalewave::ScaleInvariantParams;

fn main() -> anyhow::Result<()> {
    let out_dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    let cfg = SweepConfig {
        model: Model::Single,
        params: ModelParams::Single(ScaleInvariantParams::new(2.0, 0.0)?),
        n: 1,
        p: 1.5,
        q: None,
        data: DataConfig {
            family: BumpFamily::Smooth,
            radius: 1.0,
        },
        eps_grid: vec![2.0, 1.0, 0.5, 0.25],
        grid: GridConfig {
            dx: 1.0 / 50.0,
            cfl: 0.5,
            t_max: 100.0,
        },
        threshold: DEFAULT_THRESHOLD,
        refine: true,
        output_path: Some(out_dir.join("sweep.csv").display().to_string()),
    };
    cfg.save(&out_dir.join("sweep.json"))?;

    let report = run_sweep(&cfg)?;
    for r in &report.records {
        println!("eps = {:<6} T = {:>9.4} converged = {}", r.eps, r.t_est, r.converged);
    }
    if let Some(fit) = &report.fit {
        println!(
            "slope {:.4} vs predicted {:.4} (relative deviation {:.1}%), r2 = {:.5}",
            fit.slope,
            fit.predicted_slope,
            100.0 * fit.relative_deviation(),
            fit.r2
        );
    }
    let svg = out_dir.join("sweep.svg");
    write_sweep_svg(&report.records, report.fit.as_ref(), File::create(&svg)?)?;
    println!("wrote {} and {}", report.output_path.unwrap_or_default().display(), svg.display());
    Ok(())
}
