//! Kernel values on the backward light cone and the empirical constants of
//! their lower bounds.
//!
//! Run with `cargo run --release --example kernel_bounds`.

use scalewave::kernels::{domain_sample, kernel_e, kernel_k0_k1, verify_kernel_lower_bounds, KernelPoint};
use scalewave::ScaleInvariantParams;

fn main() -> scalewave::Result<()> {
    let sample = domain_sample(20.0, 20, 20, 20)?;
    for (mu, nu2) in [(0.0, 0.0), (2.0, 0.0), (3.0, 0.0), (3.0, 0.5), (1.5, 0.05)] {
        let params = ScaleInvariantParams::new(mu, nu2)?;
        let k = kernel_k0_k1(&params, 5.0, 0.0, 2.0)?;
        let e = kernel_e(&params, &KernelPoint::new(5.0, 0.0, 1.0, 2.0)?)?;
        let bounds = verify_kernel_lower_bounds(&params, &sample)?;
        println!(
            "mu = {mu}, nu2 = {nu2} (gamma = {:.3}): K0 = {:.5}, K1 = {:.5}, E(b=1) = {e:.5} at (t, y) = (5, 2)",
            params.gamma(),
            k.k0,
            k.k1
        );
        let mix = bounds.c_mix.map_or("n/a".to_string(), |c| format!("{c:.5}"));
        println!(
            "    c_K1 = {:.5}, c_E = {:.5}, c_mix = {mix}, all positive: {} ({} points)",
            bounds.c_k1,
            bounds.c_e,
            bounds.all_positive(),
            bounds.samples
        );
    }
    Ok(())
}
