//! Boundary values of G on the negative axis and the argument function theta.

use stablehcm::boundary::{asymptotic_constants, boundary_value, c0_formula, c_inf_formula, theta_extract};
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    let p = StableParams::one_sided(0.25)?;

    let b = boundary_value(&p, 1.0, &cfg)?;
    println!("G(-1+) = {:.10e}, theta(1) = {:.10}", b.value, b.theta);

    let th = theta_extract(&p, 1e-4, 1e4, &cfg)?;
    let (r_max, t_max) = th
        .nodes
        .iter()
        .zip(&th.theta_values)
        .fold((0.0, 0.0), |m, (&r, &t)| if t > m.1 { (r, t) } else { m });
    println!("{} nodes; theta(0+) -> {}, theta(inf) -> {}", th.nodes.len(), th.left_limit, th.right_limit);
    println!("largest theta {t_max:.8} at r = {r_max:.4}, above the limit 1/2");

    let c = asymptotic_constants(&p, &cfg)?;
    println!("c0: numeric {:.8}, formula {:.8}", c.c0_numeric, c0_formula(0.25));
    println!("c_inf: numeric {:.8}, formula {:.8}", c.c_inf_numeric, c_inf_formula(0.25));

    std::fs::write(std::env::temp_dir().join("theta_025.csv"), th.to_csv()).ok();
    Ok(())
}
