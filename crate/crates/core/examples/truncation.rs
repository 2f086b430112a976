//! HCM representations with closed-form theta, and the effect of clamping
//! theta to [-n, n].

use num_complex::Complex64;
use stablehcm::hcm::{eval_hcm, truncate_theta, HcmRepresentation, ThetaSpec};
use stablehcm::QuadratureConfig;

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    // theta(t) = sqrt(t) gives H(x) = exp(pi (1 - sqrt(x))).
    let rep = HcmRepresentation::new(1.0, 0.0, 0.0, ThetaSpec::Power { coef: 1.0, exponent: 0.5 })?;
    println!("HCM candidate: {}", rep.is_hcm_candidate());
    let x = 4.0f64;
    let h = (std::f64::consts::PI * (1.0 - x.sqrt())).exp();
    println!("H({x}) = {:.12e}, closed form {h:.12e}", eval_hcm(&rep, Complex64::new(x, 0.0), &cfg)?.re);

    println!("\nn, eps_n, lower, H_n({x}), upper");
    for n in [1.0, 4.0, 16.0] {
        let (tr, (eps, _)) = truncate_theta(&rep, n, &cfg)?;
        let hn = eval_hcm(&tr, Complex64::new(x, 0.0), &cfg)?.re;
        let upper = h * (eps * (x + 1.0 / x)).exp();
        println!("{n}, {eps:.6}, {:.8e}, {hn:.8e}, {upper:.8e}", (1.0 - eps) * h);
    }
    println!("\n{}", rep.to_json());
    Ok(())
}
