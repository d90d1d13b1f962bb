//! Blow-up of the weakly coupled system
//! `u_tt − u_xx + μ1/(1+t) u_t = |v_t|^p`, `v_tt − v_xx + μ2/(1+t) v_t = |u_t|^q`.
//!
//! Run with `cargo run --release --example system_blowup`.

use scalewave::fd::{detect_lifespan_system, Coupling, DEFAULT_THRESHOLD};
use scalewave::field::GridSpec;
use scalewave::iteration::lifespan_rate_system;
use scalewave::profile::{BumpFamily, CauchyProfile};
use scalewave::{ScaleInvariantParams, SystemParams};

fn main() -> scalewave::Result<()> {
    let sys = SystemParams::new(ScaleInvariantParams::new(2.0, 0.0)?, ScaleInvariantParams::new(3.0, 0.5)?, 1.5, 2.0)?;
    println!("sigma = ({}, {}), prediction {:?}", sys.sigma1(), sys.sigma2(), lifespan_rate_system(1, &sys)?);
    let grid = GridSpec::covering(1.0 / 50.0, 0.5, 1.0, 80.0)?;
    for eps in [2.0, 1.0, 0.5] {
        let du = CauchyProfile::bump_pair(BumpFamily::Smooth, 1.0, eps)?;
        let dv = CauchyProfile::bump_pair(BumpFamily::Polynomial { k: 4 }, 1.0, eps)?;
        let cross = detect_lifespan_system(&sys, &du, &dv, &grid, DEFAULT_THRESHOLD, Coupling::Cross)?;
        let own = detect_lifespan_system(&sys, &du, &dv, &grid, DEFAULT_THRESHOLD, Coupling::SelfOnly)?;
        println!("eps = {eps}: T (cross) = {:.4}, T (self only) = {:.4}", cross.t_est, own.t_est);
    }
    Ok(())
}
