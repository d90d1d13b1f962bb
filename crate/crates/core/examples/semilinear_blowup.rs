//! Numerical blow-up of `u_tt − u_xx + 2/(1+t) u_t = |u_t|^{3/2}` for bump
//! data of decreasing amplitude, with grid refinement.
//!
//! Run with `cargo run --release --example semilinear_blowup [eps ...]`.

use scalewave::fd::{detect_lifespan_refined, write_lifespan_csv, DEFAULT_THRESHOLD};
use scalewave::field::GridSpec;
use scalewave::profile::{BumpFamily, CauchyProfile};
use scalewave::ScaleInvariantParams;

fn main() -> scalewave::Result<()> {
    let params = ScaleInvariantParams::new(2.0, 0.0)?;
    let p = 1.5;
    let radius = 1.0;
    let mut eps_list: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if eps_list.is_empty() {
        eps_list = vec![1.0, 0.5, 0.25];
    }
    let grid = GridSpec::covering(1.0 / 100.0, 0.5, radius, 60.0)?;
    let mut records = Vec::new();
    for eps in eps_list {
        let data = CauchyProfile::bump_pair(BumpFamily::Smooth, radius, eps)?;
        let start = std::time::Instant::now();
        let rec = detect_lifespan_refined(&params, &data, p, &grid, DEFAULT_THRESHOLD)?;
        eprintln!("eps = {eps}: T = {:.4}, converged = {} ({:.1?})", rec.t_est, rec.converged, start.elapsed());
        records.push(rec);
    }
    write_lifespan_csv(&records, std::io::stdout().lock())
}
