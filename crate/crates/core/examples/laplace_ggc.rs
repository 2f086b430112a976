//! Laplace transform of G continued to the cut, and the argument test showing
//! that G is not a generalized gamma convolution for alpha > 1/2.

use num_complex::Complex64;
use stablehcm::classify::ggc_failure_diag;
use stablehcm::hcm::laplace_of_g;
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    let half = StableParams::one_sided(0.5)?;
    // -2 + 0i lies on the cut; the value is the limit from above.
    for z in [Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0)] {
        let exact = (Complex64::new(1.0, 0.0) + 4.0 * z).powf(-0.5);
        println!("alpha = 1/2, z = {z}: {:.12e} vs (1+4z)^(-1/2) = {exact:.12e}", laplace_of_g(&half, z, &cfg)?);
    }

    let d = ggc_failure_diag(0.7, &cfg)?;
    println!("\nalpha = 0.7: -arg L(-r+) on r in (delta, 10 delta]");
    for (r, a) in d.r_grid.iter().zip(&d.negated_arguments) {
        println!("  r = {r:.5}  {a:.10}");
    }
    println!("decreasing: {}; conclusion: {}", d.argument_monotone_decreasing, d.conclusion);
    Ok(())
}
