//! Classification table: the shape of theta decides HCM, anti-HCM or neither.
//! Also scans a signed density for a change of sign.

use stablehcm::classify::{classify_alpha, sign_change_predicted, sign_change_scan};
use stablehcm::QuadratureConfig;

fn main() -> stablehcm::Result<()> {
    let cfg = QuadratureConfig::default();
    println!("alpha,verdict,margin,extrema");
    for alpha in [0.2, 0.25, 0.3, 0.35, 0.45, 0.5, 0.6, 0.8] {
        println!("{}", classify_alpha(alpha, &cfg)?.table_row());
    }

    let (alpha, gamma) = (0.2, 0.45);
    println!("\ng_({alpha}, {gamma}) predicted to change sign: {}", sign_change_predicted(alpha, gamma));
    if let Some(w) = sign_change_scan(alpha, gamma, (1e-4, 10.0), &cfg)? {
        println!("g({:.6e}) = {:.3e}, g({:.6e}) = {:.3e}", w.x1, w.g1, w.x2, w.g2);
    }
    Ok(())
}
