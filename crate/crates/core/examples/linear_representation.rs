//! The linear problem via the representation formula, checked against the
//! free-wave transform available for `μ = 2, ν² = 0`.
//!
//! Run with `cargo run --release --example linear_representation`.

use scalewave::field::GridSpec;
use scalewave::linear::{solve_linear_field, solve_linear_point, DEFAULT_QTOL};
use scalewave::profile::{Bump, CauchyProfile, SourceTerm};
use scalewave::ScaleInvariantParams;

fn main() -> scalewave::Result<()> {
    let u0 = Bump::polynomial(4, 1.0)?;
    let u1 = Bump::polynomial(2, 0.8)?.with_amplitude(0.5);
    let data = CauchyProfile::from_bumps(Some(u0), Some(u1), 1.0, 1.0)?;
    let src = SourceTerm::zero();

    // With μ = 2, (1+t)u solves the free wave equation with data (u0, u0 + u1).
    let params = ScaleInvariantParams::new(2.0, 0.0)?;
    let w = |t: f64, x: f64| -> scalewave::Result<f64> {
        let spread = u0.integral(x - t, x + t)? + u1.integral(x - t, x + t)?;
        Ok(0.5 * (u0.value(x + t) + u0.value(x - t)) + 0.5 * spread)
    };
    let mut worst = 0.0f64;
    for (t, x) in [(0.5, 0.0), (1.0, 0.7), (2.0, -1.5), (3.0, 3.2)] {
        let u = solve_linear_point(&params, &data, &src, t, x, 1e-11)?;
        let exact = w(t, x)? / (1.0 + t);
        println!("u({t}, {x}) = {u:.12}  transform: {exact:.12}");
        worst = worst.max((u - exact).abs());
    }
    println!("max difference {worst:.2e}");

    // Whole field for a case without a closed form (δ = 0.36).
    let params = ScaleInvariantParams::new(1.5, 0.0)?;
    let grid = GridSpec::covering(0.1, 0.5, 1.0, 2.0)?;
    let field = solve_linear_field(&params, &data, &SourceTerm::bump_cos(Bump::smooth(0.5)?), &grid, DEFAULT_QTOL)?;
    println!(
        "field for mu = 1.5: {} levels x {} nodes, max |u| = {:.5}",
        field.times.len(),
        field.xs.len(),
        field.max_abs()
    );
    Ok(())
}
