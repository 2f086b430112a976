//! G_alpha, the stable density and its tail on a few points, with the
//! closed form at alpha = 1/2 for comparison.

use stablehcm::stable_core::{eval_density, eval_g_real, eval_tail};
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    let half = StableParams::one_sided(0.5)?;
    println!("x, G_1/2(x), closed form");
    for x in [0.05f64, 1.0, 50.0] {
        let exact = (-x / 4.0).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.sqrt());
        println!("{x}, {:.15e}, {exact:.15e}", eval_g_real(&half, x, &cfg)?);
    }

    let p = StableParams::one_sided(0.3)?;
    println!("\nalpha = 0.3: x, g(x), P(S > x)");
    for x in [0.1, 1.0, 10.0] {
        println!("{x}, {:.10e}, {:.10e}", eval_density(&p, x, &cfg)?, eval_tail(&p, x, &cfg)?);
    }

    // A signed density: asymmetry gamma different from alpha.
    let signed = StableParams::new(0.3, 0.1)?;
    println!("\ng_(0.3, 0.1)(1) = {:.10e}", eval_density(&signed, 1.0, &cfg)?);
    Ok(())
}
