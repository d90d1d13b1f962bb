//! The Gauss series `F(γ, γ; 1; z)` that enters the kernels, and the lower
//! bound `F >= 1` on `[0, 1)`.
//!
//! Run with `cargo run --example hypergeometric`.

use scalewave::hypergeometric::{hyp2f1, hyp2f1_lower_bound_check, HypergeomQuery};

fn main() -> scalewave::Result<()> {
    let zs = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99];
    print!("{:>6}", "gamma");
    for z in zs {
        print!(" {:>12}", format!("z = {z}"));
    }
    println!();
    for gamma in [-1.0, -0.5, 0.0, 0.25, 0.5] {
        print!("{gamma:>6}");
        for z in zs {
            print!(" {:>12.8}", hyp2f1(&HypergeomQuery::new(gamma, gamma, 1.0, z))?);
        }
        println!();
    }

    let grid: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
    for a in [-1.5, -0.5, 0.5] {
        println!("F({a}, {a}; 1; z) >= 1 on [0, 0.999]: {}", hyp2f1_lower_bound_check(a, 1.0, &grid)?);
    }

    // A looser tolerance trades digits for fewer terms near z = 1.
    let tight = hyp2f1(&HypergeomQuery::new(0.5, 0.5, 1.0, 0.999))?;
    let loose = hyp2f1(&HypergeomQuery::new(0.5, 0.5, 1.0, 0.999).with_tol(1e-6))?;
    println!("F(1/2, 1/2; 1; 0.999) = {tight:.15} (tol 1e-6: {loose:.15})");
    Ok(())
}
