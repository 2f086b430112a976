//! Gamma-mixture envelopes of G and rejection sampling of S^(-beta).

use stablehcm::envelopes::{
    check_envelope, envelope_constants, envelope_grid, ks_statistic, sample_inverse_beta_power,
    sharp_envelope_check, KS_CRITICAL_1PCT,
};
use stablehcm::{QuadratureConfig, StableParams};

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    let p = StableParams::one_sided(0.4)?;
    let consts = envelope_constants(&p, 100, &cfg)?;
    println!("{}", consts.to_json());

    let xs = envelope_grid(1e-3, 1e3, 200);
    let r = check_envelope(&p, &consts, &xs, &cfg)?;
    println!("slack: lower {:.3e}, upper {:.3e}", r.lower_slack, r.upper_slack);
    let (s, sign) = sharp_envelope_check(&p, &xs, &cfg)?;
    println!("sharp bounds (orientation {sign}): lower {:.3e}, upper {:.3e}", s.lower_slack, s.upper_slack);

    let set = sample_inverse_beta_power(&p, 20_000, 7, &consts, &cfg)?;
    println!("acceptance {:.4}, expected {:.4}", set.acceptance_rate, set.expected_rate);
    let d = ks_statistic(&p, &set.samples, &cfg)?;
    let scaled = d * (set.samples.len() as f64).sqrt();
    println!("KS sqrt(n) D = {scaled:.3} (1% critical value {KS_CRITICAL_1PCT})");
    Ok(())
}
