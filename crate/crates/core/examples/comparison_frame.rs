//! The comparison argument: closed-form blow-up point of the ODE, and the
//! integral inequality checked on a computed solution.
//!
//! Run with `cargo run --release --example comparison_frame`.

use scalewave::comparison::{
    comparison_blowup_z, lifespan_rate_from_frame, reduce_solution, verify_fundamental_inequality, ComparisonFrame,
};
use scalewave::fd::{solve_semilinear_field, Forcing};
use scalewave::field::GridSpec;
use scalewave::kernels::{domain_sample, verify_kernel_lower_bounds};
use scalewave::profile::{BumpFamily, CauchyProfile};
use scalewave::ScaleInvariantParams;

fn main() -> scalewave::Result<()> {
    let params = ScaleInvariantParams::new(2.0, 0.0)?;
    for p in [1.5, 2.0] {
        let frame = ComparisonFrame::from_params(1, &params, p, 1.0, 1.0, 1.0)?;
        println!("p = {p}: a = {}, rate {:?}", frame.a, lifespan_rate_from_frame(&frame)?);
        for eps in [1.0, 0.1, 0.01] {
            println!("    eps = {eps:<5} blow-up {:?}", comparison_blowup_z(&frame, eps)?);
        }
    }

    // Frame constants from the kernel bounds, then the inequality along t = z + R.
    let (p, eps, radius) = (1.5, 1.0, 1.0);
    let data = CauchyProfile::bump_pair(BumpFamily::Smooth, radius, eps)?;
    let bounds = verify_kernel_lower_bounds(&params, &domain_sample(20.0, 20, 20, 20)?)?;
    let frame = ComparisonFrame::empirical(&params, p, &bounds, data.l1_norm_sum()?, radius, data.u0_is_zero)?;
    let grid = GridSpec::covering(1.0 / 100.0, 0.5, radius, 40.0)?;
    let (field, out) = solve_semilinear_field(&params, &data, &Forcing::Power { p }, &grid, 4)?;
    let z_hi = field.t_end() - radius - 0.1;
    let trace = reduce_solution(&field, &params, radius, (radius, z_hi), 500)?;
    let report = verify_fundamental_inequality(&trace, &frame, eps)?;
    println!(
        "eps = {eps}: numerical blow-up at t = {:.3}, comparison predicts {:?}",
        out.t_end,
        comparison_blowup_z(&frame, eps)?
    );
    println!(
        "M = {:.4}, C = {:.4}: min(LHS − RHS) = {:.4e} at z = {:.3}, holds = {}",
        frame.m,
        frame.c,
        report.min_gap,
        report.argmin_z,
        report.holds()
    );
    Ok(())
}
