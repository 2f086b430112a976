//! The reciprocal of a stable variable as an HCM mixture: for alpha <= 1/2,
//! x^(-1-alpha) g_alpha(1/x) = (alpha/Gamma(1-alpha)) int H(x y) y^alpha g_(2 alpha)(y) dy / m
//! with H(s) = exp(-s^(2 alpha)/4) and m = Gamma(1/2)/Gamma(1-alpha).

use statrs::function::gamma::gamma;
use stablehcm::hcm::{hcm_probe_default, mult_convolve, tilt_density};
use stablehcm::stable_core::eval_density;
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    let alpha = 0.25;
    let p = StableParams::one_sided(alpha)?;
    let q = StableParams::one_sided(2.0 * alpha)?;
    let g2 = |y: f64| eval_density(&q, y, &cfg).unwrap_or(f64::NAN);
    let tilted = tilt_density(g2, alpha, &cfg)?;
    println!("m = {:.12}, Gamma(1/2)/Gamma(1-alpha) = {:.12}", tilted.m, gamma(0.5) / gamma(1.0 - alpha));

    let h = |s: f64| (-s.powf(2.0 * alpha) / 4.0).exp();
    let k = alpha / gamma(1.0 - alpha);
    let rhs = |x: f64| mult_convolve(h, |y| tilted.density(y), x, &cfg).map(|v| k * v);
    for x in [0.1f64, 1.0, 10.0] {
        let lhs = x.powf(-1.0 - alpha) * eval_density(&p, 1.0 / x, &cfg)?;
        println!("x = {x}: {lhs:.12e} vs {:.12e}", rhs(x)?);
    }

    let r = hcm_probe_default(rhs, 1e-9)?;
    println!("the mixture passes the HCM probe: {}", r.pass);
    Ok(())
}
