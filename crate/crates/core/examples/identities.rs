//! Identities tying G, its boundary values and stable densities of other
//! asymmetries together.

use stablehcm::boundary::cross_identity_sides;
use stablehcm::stable_core::{eval_density, half_stable_mixture, mixture_identity_residual};
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();

    // r^alpha Re G(-r+) against a density with asymmetry 1 - 2 alpha.
    let p = StableParams::one_sided(0.3)?;
    for r in [0.1, 1.0, 10.0] {
        let (l, rhs) = cross_identity_sides(&p, r, &cfg)?;
        println!("r = {r}: {l:.12e} vs {rhs:.12e}");
    }

    // Scaling by an independent stable variable of index delta'.
    for (alpha, gamma, dp, x) in [(0.3, 0.3, 0.6, 1.0), (0.4, 0.2, 0.8, 2.5)] {
        let res = mixture_identity_residual(alpha, gamma, dp, x, &cfg)?;
        println!("alpha = {alpha}, gamma = {gamma}, delta' = {dp}, x = {x}: residual {res:.2e}");
    }

    // g_(alpha, gamma) as a Gaussian-scale mixture of g_(2 alpha, 2 gamma).
    let (alpha, gamma, x) = (0.25, 0.25, 0.7);
    let direct = eval_density(&StableParams::new(alpha, gamma)?, x, &cfg)?;
    println!("mixture {:.12e} vs direct {direct:.12e}", half_stable_mixture(alpha, gamma, x, &cfg)?);
    Ok(())
}
