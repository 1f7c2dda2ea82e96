//! Plain least squares with standard errors, T-values and adjusted R².
//!
//!     cargo run --example ols_diagnostics

use emotrace::format::sig4;
use emotrace::regression::fit_ols_named;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn main() -> anyhow::Result<()> {
    let mut rng = StdRng::seed_from_u64(1);
    let names = ["speed".to_string(), "loudness".to_string(), "noise".to_string()];
    let x: Vec<Vec<f64>> = (0..60)
        .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let y: Vec<f64> = x
        .iter()
        .map(|r| 0.2 + 0.8 * r[0] + 0.3 * r[1] + 0.1 * rng.random_range(-1.0..1.0))
        .collect();

    let fit = fit_ols_named(&x, &y, &names)?;
    println!("intercept {}", sig4(fit.intercept));
    println!("feature     weight      SE        t");
    for (j, name) in names.iter().enumerate() {
        println!(
            "{name:<9} {:>8} {:>9} {:>8}",
            sig4(fit.weights[j]),
            sig4(fit.standard_errors[j]),
            sig4(fit.t_values[j])
        );
    }
    println!("R² {}  adjusted R² {}", sig4(fit.r2), sig4(fit.adjusted_r2));
    Ok(())
}
