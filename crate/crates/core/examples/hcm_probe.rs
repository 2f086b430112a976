//! Divided-difference probes for complete monotonicity and HCM, on known
//! functions and on G itself.

use stablehcm::hcm::{cm_probe, geometric_grid, hcm_probe_default, hcm_probe_g};
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let grid = geometric_grid(0.1, 10.0, 1.2);
    let cm = cm_probe(|x| Ok(1.0 / (1.0 + x)), &grid, 8, 1e-15)?;
    let not_cm = cm_probe(|x| Ok((-x * x).exp()), &grid, 8, 1e-15)?;
    println!("1/(1+x): pass = {}, margin = {:.3e}", cm.pass, cm.margin);
    println!("exp(-x^2): pass = {}, first violation = {:?}", not_cm.pass, not_cm.first_violation);

    // Gamma densities are HCM; a two-bump mixture is not.
    let gamma = hcm_probe_default(|x| Ok(x.powf(1.5) * (-x).exp()), 1e-15)?;
    let bumps = hcm_probe_default(|x| Ok((-(x - 1.0).powi(2) * 20.0).exp() + (-(x - 4.0).powi(2) * 20.0).exp()), 1e-15)?;
    println!("x^1.5 e^-x: pass = {}", gamma.pass);
    println!("two bumps: pass = {}", bumps.pass);

    // G is HCM exactly when e^(delta x) G is.
    let cfg = QuadratureConfig::default();
    for alpha in [0.25, 0.4] {
        let r = hcm_probe_g(&StableParams::one_sided(alpha)?, &cfg)?;
        println!("G_{alpha}: pass = {}, margin = {:.3e} noise units", r.pass, r.margin);
    }
    Ok(())
}
