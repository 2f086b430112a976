//! Rebuilds G from its theta function through the exponential Stieltjes
//! representation and compares with direct evaluation.

use num_complex::Complex64;
use stablehcm::boundary::theta_extract;
use stablehcm::hcm::{reconstruct_g_raw, HcmRepresentation};
use stablehcm::stable_core::{eval_g_complex, eval_g_real};
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    for alpha in [0.2, 0.5, 0.7] {
        let p = StableParams::one_sided(alpha)?;
        let th = theta_extract(&p, 1e-6, 1e4, &cfg)?;
        let mut worst: f64 = 0.0;
        for k in 0..30 {
            let x = 0.01 * 1e4f64.powf(k as f64 / 29.0);
            let rec = reconstruct_g_raw(&p, &th, Complex64::new(x, 0.0), &cfg)?.re;
            let direct = eval_g_real(&p, x, &cfg)?;
            worst = worst.max(((rec - direct) / direct).abs());
        }
        println!("alpha = {alpha}: max relative error on [0.01, 100] = {worst:.2e}");
    }

    // Off the axis as well.
    let p = StableParams::one_sided(0.35)?;
    let th = theta_extract(&p, 1e-6, 1e4, &cfg)?;
    let z = Complex64::new(-0.5, 2.0);
    println!("z = {z}: rebuilt {:.8e}", reconstruct_g_raw(&p, &th, z, &cfg)?);
    println!("         direct {:.8e}", eval_g_complex(&p, z, &cfg)?);

    let rep = HcmRepresentation::from_theta_function(&th)?;
    println!("representation JSON is {} bytes", rep.to_json().len());
    Ok(())
}
