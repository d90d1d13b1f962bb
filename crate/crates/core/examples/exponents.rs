//! Critical exponents, shifted critical curve and lifespan predictions.
//!
//! Run with `cargo run --example exponents`.

use scalewave::params::{
    classify_sigmas, cusp_exponents, fujita, glassey, predicted_lifespan_exponent, strauss, DEFAULT_CRITICAL_TOL,
};
use scalewave::ScaleInvariantParams;

fn main() -> scalewave::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10}", "d", "Glassey", "Strauss", "Fujita");
    for d in [1.5, 2.0, 3.0, 4.0] {
        println!("{d:>6} {:>10.6} {:>10.6} {:>10.6}", glassey(d)?, strauss(d)?, fujita(d)?);
    }

    // The shift σ moves the single-equation threshold from n to n + σ.
    println!();
    for (mu, nu2) in [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.5), (1.5, 0.05)] {
        let params = ScaleInvariantParams::new(mu, nu2)?;
        let d = 1.0 + params.sigma();
        print!("mu = {mu}, nu2 = {nu2}: delta = {:.4}, sigma = {:.4}", params.delta(), params.sigma());
        for p in [1.5, 2.0] {
            match predicted_lifespan_exponent(1, &params, p) {
                Ok(pred) => print!(", p = {p}: {pred:?}"),
                Err(_) => print!(", p = {p}: none (p_Gla = {:.4})", glassey(d).unwrap_or(f64::INFINITY)),
            }
        }
        println!();
    }

    println!();
    for (s1, s2, p, q) in [(0.0, 0.0, 2.0, 2.0), (2.0, 2.0, 2.0, 2.0), (2.0, 3.0, 1.5, 3.0), (2.0, 2.0, 3.0, 3.0)] {
        let report = classify_sigmas(1, s1, s2, p, q, DEFAULT_CRITICAL_TOL)?;
        println!(
            "sigma = ({s1}, {s2}), (p, q) = ({p}, {q}): Lambda = ({:.4}, {:.4}) -> {:?}",
            report.lambda1, report.lambda2, report.regime
        );
    }
    let cusp = cusp_exponents(1, 3.0, 2.0)?;
    println!("cusp for sigma = (3, 2): (p, q) = ({:.4}, {:.4}), admissible = {}", cusp.p, cusp.q, cusp.admissible);
    Ok(())
}
