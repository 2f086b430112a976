//! HCM / anti-HCM verdicts for `G_alpha` from the monotonicity of its
//! boundary argument, sign changes of two-sided stable densities, and the
//! Laplace-argument diagnostic showing `S_alpha^(-beta)` is not GGC.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{theta_extract, ThetaFunction};
use crate::error::{Error, Result};
use crate::hcm::laplace_of_g;
use crate::params::{QuadratureConfig, StableParams};
use crate::stable_core::eval_density;

/// Multiple of the noise floor a feature of `theta` must exceed to count.
pub const MARGIN_FACTOR: f64 = 10.0;
/// Range of `r` on which `theta` is extracted for a verdict.
pub const THETA_RANGE: (f64, f64) = (1e-6, 1e4);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "HCM")]
    Hcm,
    #[serde(rename = "AntiHCM")]
    AntiHcm,
    Neither,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Hcm => "HCM",
            Verdict::AntiHcm => "AntiHCM",
            Verdict::Neither => "Neither",
            Verdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub alpha: f64,
    pub verdict: Verdict,
    /// Interior local extrema `(r, theta)` larger than the margin threshold.
    pub theta_extrema: Vec<(f64, f64)>,
    /// Size of the feature deciding the verdict, in units of `noise_floor`.
    pub monotonicity_margin: f64,
    pub noise_floor: f64,
    /// Largest increase `theta(r2) - theta(r1)` with `r1 < r2`.
    pub rise: f64,
    /// Largest decrease `theta(r1) - theta(r2)` with `r1 < r2`.
    pub drop: f64,
    /// `theta` at the first node minus `alpha`, and at the last node minus 1/2.
    pub endpoint_gaps: (f64, f64),
    pub evidence_grid: ThetaFunction,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `alpha,verdict,margin,extrema` row; extrema as `r:theta` joined by `;`.
    pub fn table_row(&self) -> String {
        let extrema: Vec<String> = self
            .theta_extrema
            .iter()
            .map(|(r, t)| format!("{r:.6e}:{t:.10}"))
            .collect();
        format!("{},{},{:.6e},{}", self.alpha, self.verdict, self.monotonicity_margin, extrema.join(";"))
    }
}

/// Largest rise and drop of a sequence.
fn rise_and_drop(values: &[f64]) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut rise, mut drop) = (0.0f64, 0.0f64);
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
        rise = rise.max(v - lo);
        drop = drop.max(hi - v);
    }
    (rise, drop)
}

/// Turning points of a zigzag with hysteresis `threshold`.
fn turning_points(nodes: &[f64], values: &[f64], threshold: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if values.is_empty() {
        return out;
    }
    let mut dir = 0i8;
    let mut ext = 0usize;
    for i in 1..values.len() {
        let v = values[i];
        match dir {
            0 => {
                if v > values[ext] + threshold {
                    dir = 1;
                    ext = i;
                } else if v < values[ext] - threshold {
                    dir = -1;
                    ext = i;
                }
            }
            1 => {
                if v >= values[ext] {
                    ext = i;
                } else if v < values[ext] - threshold {
                    out.push((nodes[ext], values[ext]));
                    dir = -1;
                    ext = i;
                }
            }
            _ => {
                if v <= values[ext] {
                    ext = i;
                } else if v > values[ext] + threshold {
                    out.push((nodes[ext], values[ext]));
                    dir = 1;
                    ext = i;
                }
            }
        }
    }
    out
}

/// Verdict from an extracted `theta`.
pub fn classify_theta(theta: &ThetaFunction, cfg: &QuadratureConfig) -> ClassificationReport {
    let worst_rel = theta.rel_errors.iter().copied().fold(0.0, f64::max);
    let noise = cfg.rel_tol.max(worst_rel) / std::f64::consts::PI;
    let (rise, drop) = rise_and_drop(&theta.theta_values);
    let threshold = MARGIN_FACTOR * noise;
    let (verdict, margin) = if drop <= noise && rise > threshold {
        (Verdict::Hcm, rise / noise)
    } else if rise <= noise && drop > threshold {
        (Verdict::AntiHcm, drop / noise)
    } else if rise > threshold && drop > threshold {
        (Verdict::Neither, rise.min(drop) / noise)
    } else {
        (Verdict::Inconclusive, rise.max(drop) / noise)
    };
    let n = theta.theta_values.len();
    ClassificationReport {
        alpha: theta.alpha,
        verdict,
        theta_extrema: turning_points(&theta.nodes, &theta.theta_values, threshold),
        monotonicity_margin: margin,
        noise_floor: noise,
        rise,
        drop,
        endpoint_gaps: (
            theta.theta_values[0] - theta.alpha,
            theta.theta_values[n - 1] - 0.5,
        ),
        evidence_grid: theta.clone(),
    }
}

/// Extracts `theta` on [`THETA_RANGE`] and classifies `G_alpha`.
pub fn classify_alpha(alpha: f64, cfg: &QuadratureConfig) -> Result<ClassificationReport> {
    let p = StableParams::one_sided(alpha)?;
    let theta = theta_extract(&p, THETA_RANGE.0, THETA_RANGE.1, cfg)?;
    Ok(classify_theta(&theta, cfg))
}

/// Two points where the density has opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignWitness {
    pub x1: f64,
    pub g1: f64,
    pub x2: f64,
    pub g2: f64,
}

/// Whether `g_{alpha,gamma}` is known to change sign: `alpha < min(gamma, 1/2)`.
pub fn sign_change_predicted(alpha: f64, gamma: f64) -> bool {
    alpha < gamma.min(0.5)
}

/// Searches a log grid on `x_range` (refined up to four times) for a sign
/// change of `g_{alpha,gamma}` and narrows the bracket by bisection. A
/// predicted sign change that is not found is a `ScanExhausted` error.
pub fn sign_change_scan(
    alpha: f64,
    gamma: f64,
    x_range: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<Option<SignWitness>> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("sign_change_scan needs gamma > 0, got {gamma}")));
    }
    let p = StableParams::new(alpha, gamma)?;
    let (lo, hi) = x_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Domain(format!("need 0 < x_min < x_max, got [{lo}, {hi}]")));
    }
    let g = |x: f64| eval_density(&p, x, cfg);
    let mut n = 200;
    for _ in 0..5 {
        let xs: Vec<f64> = (0..n)
            .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
            .collect();
        let vals = xs.par_iter().map(|&x| g(x)).collect::<Result<Vec<f64>>>()?;
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 1e3 * cfg.abs_tol.max(cfg.rel_tol * scale * 1e-3);
        let signed: Vec<(f64, f64)> = xs
            .iter()
            .zip(&vals)
            .filter(|(_, v)| v.abs() > floor)
            .map(|(&x, &v)| (x, v))
            .collect();
        if let Some(w) = signed.windows(2).find(|w| w[0].1.signum() != w[1].1.signum()) {
            let (mut a, mut ga, mut b, mut gb) = (w[0].0, w[0].1, w[1].0, w[1].1);
            while b / a > 1.001 {
                let m = (a * b).sqrt();
                let gm = g(m)?;
                if gm.abs() <= floor {
                    break;
                }
                if gm.signum() == ga.signum() {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                    gb = gm;
                }
            }
            return Ok(Some(SignWitness { x1: a, g1: ga, x2: b, g2: gb }));
        }
        if !sign_change_predicted(alpha, gamma) {
            return Ok(None);
        }
        n *= 2;
    }
    Err(Error::ScanExhausted { lo, hi })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GgcDiagnostic {
    pub alpha: f64,
    pub r_grid: Vec<f64>,
    /// `-arg Lp(-r+)` on the grid.
    pub negated_arguments: Vec<f64>,
    /// Smallest decrease between neighbouring grid points.
    pub min_decrease: f64,
    pub argument_monotone_decreasing: bool,
    /// `"not GGC"` or `"inconclusive"`.
    pub conclusion: String,
}

/// For `alpha > 1/2`: the negated argument of the Laplace transform of
/// `G_alpha` on `-r+`, `r` in `(delta, 10 delta]`. A strictly decreasing
/// argument means the transform is not HCM, so `S_alpha^(-beta)` is not GGC.
pub fn ggc_failure_diag(alpha: f64, cfg: &QuadratureConfig) -> Result<GgcDiagnostic> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::Domain(format!("ggc_failure_diag needs alpha in (1/2, 1), got {alpha}")));
    }
    let p = StableParams::one_sided(alpha)?;
    let delta = p.delta();
    let n = 12;
    let r_grid: Vec<f64> = (1..=n).map(|k| delta * (1.0 + 9.0 * k as f64 / n as f64)).collect();
    let negated_arguments = r_grid
        .par_iter()
        .map(|&r| Ok(-laplace_of_g(&p, Complex64::new(-r, 0.0), cfg)?.arg()))
        .collect::<Result<Vec<f64>>>()?;
    let min_decrease = negated_arguments
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    let noise = 1e3 * cfg.rel_tol;
    let decreasing = min_decrease > MARGIN_FACTOR * noise;
    Ok(GgcDiagnostic {
        alpha,
        r_grid,
        negated_arguments,
        min_decrease,
        argument_monotone_decreasing: decreasing,
        conclusion: if decreasing { "not GGC" } else { "inconclusive" }.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rise_drop_and_turning_points() {
        let v = [0.2, 0.3, 0.5, 0.51, 0.5, 0.5];
        let (rise, drop) = rise_and_drop(&v);
        assert!((rise - 0.31).abs() < 1e-15 && (drop - 0.01).abs() < 1e-15);
        let nodes = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(turning_points(&nodes, &v, 1e-3), vec![(4.0, 0.51)]);
        assert!(turning_points(&nodes, &v, 0.05).is_empty());
    }

    #[test]
    fn synthetic_verdicts() {
        let cfg = QuadratureConfig::default();
        let make = |values: Vec<f64>| {
            let nodes: Vec<f64> = (1..=values.len()).map(|k| k as f64).collect();
            let lm = vec![0.0; values.len()];
            ThetaFunction::from_parts(0.4, nodes, values, lm).unwrap()
        };
        assert_eq!(classify_theta(&make(vec![0.4, 0.45, 0.5]), &cfg).verdict, Verdict::Hcm);
        assert_eq!(classify_theta(&make(vec![0.7, 0.6, 0.5]), &cfg).verdict, Verdict::AntiHcm);
        let neither = classify_theta(&make(vec![0.4, 0.51, 0.5]), &cfg);
        assert_eq!(neither.verdict, Verdict::Neither);
        assert_eq!(neither.theta_extrema.len(), 1);
        assert_eq!(classify_theta(&make(vec![0.5, 0.5, 0.5]), &cfg).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn sign_changes() {
        let cfg = QuadratureConfig::default();
        let w = sign_change_scan(0.2, 0.45, (1e-3, 1e3), &cfg).unwrap().unwrap();
        assert!(w.g1 * w.g2 < 0.0 && w.x1 < w.x2);
        assert!(sign_change_scan(0.3, 0.3, (1e-3, 1e3), &cfg).unwrap().is_none());
        assert!(sign_change_scan(0.3, 0.0, (1e-3, 1e3), &cfg).unwrap_err().is_domain());
    }

    #[test]
    fn diagnostic_needs_alpha_above_half() {
        assert!(ggc_failure_diag(0.4, &QuadratureConfig::default()).unwrap_err().is_domain());
    }
}
