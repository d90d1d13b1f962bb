//! Exponent sequences of the iteration argument for the system, their
//! extended-precision bound chains and the divergence thresholds.
//!
//! Run with `cargo run --example iteration_sequences`.

use scalewave::iteration::{divergence_threshold, lifespan_rate_system, sequences_for_regime, FrameConstants};
use scalewave::params::{classify_system, cusp_exponents, DEFAULT_CRITICAL_TOL};
use scalewave::{ScaleInvariantParams, SystemParams};

fn main() -> scalewave::Result<()> {
    let comp = |sigma: f64| ScaleInvariantParams::new(sigma, 0.0);
    let cusp = cusp_exponents(1, 3.0, 2.0)?;
    let systems = [
        SystemParams::new(comp(2.0)?, comp(2.0)?, 1.5, 2.0)?,
        // On the first critical branch: Λ(3, 2, 2) = 0 > Λ(3.5, 2, 2).
        SystemParams::new(comp(2.0)?, comp(2.5)?, 2.0, 2.0)?,
        SystemParams::new(comp(3.0)?, comp(2.0)?, cusp.p, cusp.q)?,
    ];
    let mut stdout = std::io::stdout().lock();
    for sys in &systems {
        let report = classify_system(1, sys, DEFAULT_CRITICAL_TOL)?;
        println!(
            "\nsigma = ({}, {}), (p, q) = ({:.4}, {:.4}): {:?}",
            sys.sigma1(),
            sys.sigma2(),
            sys.p,
            sys.q,
            report.regime
        );
        if !report.regime.blows_up() {
            continue;
        }
        let seq = sequences_for_regime(1, sys, FrameConstants::default(), 0.1, 6)?;
        seq.write_csv(&mut stdout)?;
        let verdict = divergence_threshold(&seq, 50.0, 1.0)?;
        println!(
            "bounds diverge at z = 50: {} (threshold {:?} > e^{:.4}), rate {:?}, regime matches: {}",
            verdict.diverges,
            verdict.variable,
            verdict.log_threshold,
            lifespan_rate_system(1, sys)?,
            seq.regime_matches()
        );
    }
    Ok(())
}
