//! Two-piece gamma envelopes of `G_alpha`, their sharp form for
//! `alpha >= 1/3`, and a rejection sampler for `S_alpha^(-beta)`.
//!
//! With `f1(x) = x^-alpha e^(-delta x) 1_[0,1]` and
//! `f2(x) = x^-1/2 e^(-delta x) 1_(1,inf)`,
//! `A_- f1 + B_- f2 <= G_alpha <= A_+ f1 + B_+ f2`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::{gamma, gamma_lr};

use crate::boundary::{c0_formula, c_inf_formula};
use crate::error::{Error, Result};
use crate::params::{QuadratureConfig, StableParams};
use crate::stable_core::{cdf_inverse_power, eval_g_scaled};

/// Relative agreement required between a grid and its doubling.
pub const REFINEMENT_TOL: f64 = 5e-3;
/// Relative slack below which an envelope check counts as violated.
pub const ENVELOPE_NOISE: f64 = 1e-9;
/// Smallest `x` sampled for `A_+-`; below it the `c0` limit stands in.
const A_GRID_MIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeConstants {
    pub alpha: f64,
    pub delta: f64,
    pub c0: f64,
    pub c_inf: f64,
    #[serde(rename = "G_at_1")]
    pub g_at_1: f64,
    /// Supremum of `x^alpha e^(delta x) G(x)` over `(0, 1]`.
    #[serde(rename = "A_plus")]
    pub a_plus: f64,
    /// Infimum of the same ratio.
    #[serde(rename = "A_minus")]
    pub a_minus: f64,
    /// Supremum of `x^(1/2) e^(delta x) G(x)` over `[1, inf)`.
    #[serde(rename = "B_plus")]
    pub b_plus: f64,
    #[serde(rename = "B_minus")]
    pub b_minus: f64,
}

impl EnvelopeConstants {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("constants serialize")
    }

    /// `int (A_+ f1 + B_+ f2)`, the reciprocal of the sampler's acceptance rate.
    pub fn upper_mass(&self) -> f64 {
        let (m1, m2) = piece_masses(self.alpha, self.delta);
        self.a_plus * m1 + self.b_plus * m2
    }
}

/// `int_0^1 x^-alpha e^(-delta x) dx` and `int_1^inf x^-1/2 e^(-delta x) dx`.
pub fn piece_masses(alpha: f64, delta: f64) -> (f64, f64) {
    let s = 1.0 - alpha;
    let m1 = delta.powf(-s) * gamma(s) * gamma_lr(s, delta);
    let m2 = (std::f64::consts::PI / delta).sqrt() * erfc(delta.sqrt());
    (m1, m2)
}

pub fn f1(p: &StableParams, x: f64) -> f64 {
    if x > 0.0 && x <= 1.0 {
        x.powf(-p.alpha()) * (-p.delta() * x).exp()
    } else {
        0.0
    }
}

pub fn f2(p: &StableParams, x: f64) -> f64 {
    if x > 1.0 {
        x.powf(-0.5) * (-p.delta() * x).exp()
    } else {
        0.0
    }
}

/// `x^power e^(delta x) G(x)` without forming `e^(delta x)`.
fn weighted(p: &StableParams, x: f64, power: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(x.powf(power) * eval_g_scaled(p, x, cfg)?.value)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// Grid extrema of `h`, refined by golden-section search on log scale
/// around interior extrema.
fn extrema(h: &(dyn Fn(f64) -> Result<f64> + Sync), grid: &[f64]) -> Result<(f64, f64, f64, f64)> {
    let values = grid.par_iter().map(|&x| h(x)).collect::<Result<Vec<f64>>>()?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ilo, mut ihi) = (0, 0);
    for (i, &v) in values.iter().enumerate() {
        if v < lo {
            lo = v;
            ilo = i;
        }
        if v > hi {
            hi = v;
            ihi = i;
        }
    }
    let raw = (lo, hi);
    let polish = |i: usize, sign: f64| -> Result<f64> {
        if i == 0 || i + 1 == grid.len() {
            return Ok(sign * values[i]);
        }
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (grid[i - 1].ln(), grid[i + 1].ln());
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = sign * h(c.exp())?;
        let mut fd = sign * h(d.exp())?;
        for _ in 0..40 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = sign * h(c.exp())?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = sign * h(d.exp())?;
            }
        }
        Ok(fc.max(fd).max(sign * values[i]))
    };
    Ok((raw.0, raw.1, -polish(ilo, -1.0)?, polish(ihi, 1.0)?))
}

fn stable_pair(coarse: f64, fine: f64, lo: f64, hi: f64) -> Result<()> {
    if (coarse - fine).abs() > REFINEMENT_TOL * fine.abs() {
        return Err(Error::Refinement { lo, hi });
    }
    Ok(())
}

/// `A_+-` over `(0, 1]` and `B_+-` over `[1, 50/delta]`, with the limits `c0`
/// and `c_inf` as endpoint values; `grid_density` points per piece, checked
/// against a doubled grid.
pub fn envelope_constants(p: &StableParams, grid_density: usize, cfg: &QuadratureConfig) -> Result<EnvelopeConstants> {
    p.require_one_sided("envelope_constants")?;
    if grid_density < 4 {
        return Err(Error::Domain("grid_density must be at least 4".into()));
    }
    let alpha = p.alpha();
    let c0 = c0_formula(alpha);
    let c_inf = c_inf_formula(alpha);
    let x_max = 50.0 / p.delta();
    let ha = |x: f64| weighted(p, x, alpha, cfg);
    let hb = |x: f64| weighted(p, x, 0.5, cfg);
    let mut out = [0.0f64; 4];
    for (slot, (h, lo, hi, limit)) in [
        (&ha as &(dyn Fn(f64) -> Result<f64> + Sync), A_GRID_MIN, 1.0, c0),
        (&hb, 1.0, x_max, c_inf),
    ]
    .into_iter()
    .enumerate()
    {
        let coarse = extrema(h, &log_grid(lo, hi, grid_density))?;
        let fine = extrema(h, &log_grid(lo, hi, 2 * grid_density))?;
        stable_pair(coarse.0.min(limit), fine.0.min(limit), lo, hi)?;
        stable_pair(coarse.1.max(limit), fine.1.max(limit), lo, hi)?;
        out[2 * slot] = fine.3.max(coarse.3).max(limit);
        out[2 * slot + 1] = fine.2.min(coarse.2).min(limit);
    }
    let consts = EnvelopeConstants {
        alpha,
        delta: p.delta(),
        c0,
        c_inf,
        g_at_1: eval_g_scaled(p, 1.0, cfg)?.value * (-p.delta()).exp(),
        a_plus: out[0],
        a_minus: out[1],
        b_plus: out[2],
        b_minus: out[3],
    };
    if [consts.a_plus, consts.a_minus, consts.b_plus, consts.b_minus]
        .iter()
        .any(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(Error::Refinement { lo: 0.0, hi: x_max });
    }
    Ok(consts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub alpha: f64,
    pub n_points: usize,
    /// Smallest `(G - lower) / G` over the grid.
    pub lower_slack: f64,
    pub lower_at: f64,
    /// Smallest `(upper - G) / G` over the grid.
    pub upper_slack: f64,
    pub upper_at: f64,
}

/// Coefficients `(c1, c2)` of `c1 f1 + c2 f2` for the lower and upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeBounds {
    pub lower: (f64, f64),
    pub upper: (f64, f64),
}

impl EnvelopeBounds {
    pub fn from_constants(c: &EnvelopeConstants) -> Self {
        Self {
            lower: (c.a_minus, c.b_minus),
            upper: (c.a_plus, c.b_plus),
        }
    }
}

/// Sharp bounds: `x^alpha e^(delta x) G` runs between `c0` and `e^delta G(1)`
/// on `(0, 1]`, and `x^(1/2) e^(delta x) G` between `e^delta G(1)` and `c_inf`
/// on `[1, inf)`. The sign of `c0 - e^delta G(1)` fixes the orientation:
/// positive for `alpha < 1/2`, negative above.
pub fn sharp_bounds(c: &EnvelopeConstants) -> (EnvelopeBounds, f64) {
    let k1 = c.g_at_1 * c.delta.exp();
    let sign = (c.c0 - k1).signum();
    let high = (c.c0, c.c_inf);
    let low = (k1, k1);
    let bounds = if sign >= 0.0 {
        EnvelopeBounds { lower: low, upper: high }
    } else {
        EnvelopeBounds { lower: high, upper: low }
    };
    (bounds, sign)
}

fn check_bounds(
    p: &StableParams,
    bounds: &EnvelopeBounds,
    x_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<EnvelopeReport> {
    if x_grid.is_empty() || x_grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Domain("envelope grid needs positive finite points".into()));
    }
    let alpha = p.alpha();
    // Ratios `G / (f1 or f2)`, which also cover the right limit at the splice x = 1.
    let mut points: Vec<(f64, f64, usize)> = Vec::with_capacity(x_grid.len() + 1);
    for &x in x_grid {
        points.push((x, if x <= 1.0 { alpha } else { 0.5 }, if x <= 1.0 { 0 } else { 1 }));
    }
    points.push((1.0, 0.5, 1));
    let ratios = points
        .par_iter()
        .map(|&(x, power, _)| weighted(p, x, power, cfg))
        .collect::<Result<Vec<f64>>>()?;
    let mut report = EnvelopeReport {
        alpha,
        n_points: x_grid.len(),
        lower_slack: f64::INFINITY,
        lower_at: f64::NAN,
        upper_slack: f64::INFINITY,
        upper_at: f64::NAN,
    };
    for (&(x, _, piece), &r) in points.iter().zip(&ratios) {
        let (lo, hi) = if piece == 0 {
            (bounds.lower.0, bounds.upper.0)
        } else {
            (bounds.lower.1, bounds.upper.1)
        };
        let ls = (r - lo) / r;
        let us = (hi - r) / r;
        if ls < report.lower_slack {
            report.lower_slack = ls;
            report.lower_at = x;
        }
        if us < report.upper_slack {
            report.upper_slack = us;
            report.upper_at = x;
        }
    }
    if report.lower_slack < -ENVELOPE_NOISE {
        return Err(Error::EnvelopeViolation {
            x: report.lower_at,
            slack: report.lower_slack,
        });
    }
    if report.upper_slack < -ENVELOPE_NOISE {
        return Err(Error::EnvelopeViolation {
            x: report.upper_at,
            slack: report.upper_slack,
        });
    }
    Ok(report)
}

/// Checks `A_- f1 + B_- f2 <= G <= A_+ f1 + B_+ f2` on the grid.
pub fn check_envelope(
    p: &StableParams,
    consts: &EnvelopeConstants,
    x_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<EnvelopeReport> {
    if (consts.alpha - p.alpha()).abs() > 1e-15 {
        return Err(Error::Precondition("envelope constants belong to another alpha".into()));
    }
    check_bounds(p, &EnvelopeBounds::from_constants(consts), x_grid, cfg)
}

/// Checks the sharp bounds of [`sharp_bounds`]; needs `alpha >= 1/3`.
pub fn sharp_envelope_check(p: &StableParams, x_grid: &[f64], cfg: &QuadratureConfig) -> Result<(EnvelopeReport, f64)> {
    p.require_one_sided("sharp_envelope_check")?;
    if p.alpha() < 1.0 / 3.0 {
        return Err(Error::Domain(format!(
            "the sharp envelope needs alpha >= 1/3, got {}",
            p.alpha()
        )));
    }
    let alpha = p.alpha();
    let consts = EnvelopeConstants {
        alpha,
        delta: p.delta(),
        c0: c0_formula(alpha),
        c_inf: c_inf_formula(alpha),
        g_at_1: eval_g_scaled(p, 1.0, cfg)?.value * (-p.delta()).exp(),
        a_plus: f64::NAN,
        a_minus: f64::NAN,
        b_plus: f64::NAN,
        b_minus: f64::NAN,
    };
    let (bounds, sign) = sharp_bounds(&consts);
    Ok((check_bounds(p, &bounds, x_grid, cfg)?, sign))
}

/// `n` points log-spaced on `[lo, hi]`.
pub fn envelope_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    log_grid(lo, hi, n)
}

/// Draws attempted for one variate before the envelope is declared useless.
const MAX_ATTEMPTS: u32 = 100_000;
/// Asymptotic 1% critical value of `sqrt(n) D_n`.
pub const KS_CRITICAL_1PCT: f64 = 1.628;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub seed: u64,
    pub samples: Vec<f64>,
    pub proposals: u64,
    pub acceptance_rate: f64,
    /// `1 / int (A_+ f1 + B_+ f2)`.
    pub expected_rate: f64,
}

impl SampleSet {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x\n");
        for x in &self.samples {
            out.push_str(&format!("{x:.17e}\n"));
        }
        out
    }
}

/// `y` in `[0, delta]` with `P(s, y) = target`, by bisection.
fn truncated_gamma_quantile(s: f64, delta: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, delta);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if gamma_lr(s, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rejection sampling of `S_alpha^(-beta)` against `A_+ f1 + B_+ f2`. Draw
/// `i` uses its own ChaCha stream `(seed, i)`, so the result does not
/// depend on scheduling.
pub fn sample_inverse_beta_power(
    p: &StableParams,
    n: usize,
    seed: u64,
    consts: &EnvelopeConstants,
    cfg: &QuadratureConfig,
) -> Result<SampleSet> {
    p.require_one_sided("sample_inverse_beta_power")?;
    if (consts.alpha - p.alpha()).abs() > 1e-15 {
        return Err(Error::Precondition("envelope constants belong to another alpha".into()));
    }
    let (alpha, delta) = (p.alpha(), p.delta());
    let s = 1.0 - alpha;
    let (m1, m2) = piece_masses(alpha, delta);
    let w1 = consts.a_plus * m1 / (consts.a_plus * m1 + consts.b_plus * m2);
    let p_delta = gamma_lr(s, delta);
    let erfc_delta = erfc(delta.sqrt());
    let draws = (0..n)
        .into_par_iter()
        .map(|i| -> Result<(f64, u64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            for attempt in 1..=MAX_ATTEMPTS {
                let first = rng.gen::<f64>() < w1;
                let v = 1.0 - rng.gen::<f64>();
                let (x, power, bound) = if first {
                    (truncated_gamma_quantile(s, delta, v * p_delta) / delta, alpha, consts.a_plus)
                } else {
                    let r = erfc_inv(v * erfc_delta);
                    (r * r / delta, 0.5, consts.b_plus)
                };
                let u: f64 = rng.gen();
                if x > 0.0 && u * bound <= weighted(p, x, power, cfg)? {
                    return Ok((x, attempt as u64));
                }
            }
            Err(Error::EnvelopeQuality {
                rate: 1.0 / MAX_ATTEMPTS as f64,
            })
        })
        .collect::<Result<Vec<(f64, u64)>>>()?;
    let proposals: u64 = draws.iter().map(|d| d.1).sum();
    let acceptance_rate = n as f64 / proposals.max(1) as f64;
    if acceptance_rate < 0.01 {
        return Err(Error::EnvelopeQuality { rate: acceptance_rate });
    }
    Ok(SampleSet {
        seed,
        samples: draws.into_iter().map(|d| d.0).collect(),
        proposals,
        acceptance_rate,
        expected_rate: 1.0 / consts.upper_mass(),
    })
}

/// Kolmogorov-Smirnov distance between the sample and the distribution of
/// `S_alpha^(-beta)`.
pub fn ks_statistic(p: &StableParams, samples: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let cdf = xs
        .par_iter()
        .map(|&x| cdf_inverse_power(p, x, cfg))
        .collect::<Result<Vec<f64>>>()?;
    let n = xs.len() as f64;
    Ok(cdf
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn half_constants_are_c_inf() {
        let p = StableParams::one_sided(0.5).unwrap();
        let c = envelope_constants(&p, 40, &cfg()).unwrap();
        let c_inf = 0.5 / std::f64::consts::PI.sqrt();
        for v in [c.a_plus, c.a_minus, c.b_plus, c.b_minus, c.c0, c.c_inf] {
            assert!((v - c_inf).abs() < 1e-12 * c_inf);
        }
        assert!((c.upper_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sups_contain_asymptotes() {
        let p = StableParams::one_sided(0.4).unwrap();
        let c = envelope_constants(&p, 60, &cfg()).unwrap();
        assert!(c.a_plus >= c.c0 && c.b_plus >= c.c_inf);
        assert!(c.a_minus <= c.a_plus && c.b_minus <= c.b_plus);
        let json = c.to_json();
        assert!(json.contains("\"A_plus\"") && json.contains("\"G_at_1\""));
    }

    #[test]
    fn piece_masses_match_quadrature() {
        for &a in &[0.2, 0.5, 0.85] {
            let p = StableParams::one_sided(a).unwrap();
            let (m1, m2) = piece_masses(a, p.delta());
            let q1 = integrate(|x| f1(&p, x), 0.0, 1.0, &cfg(), "f1").unwrap().value;
            let q2 = crate::quadrature::integrate_half_line(|x| f2(&p, x), 1.0, &[2.0, 10.0], 1.0 / p.delta(), &cfg(), "f2")
                .unwrap()
                .value;
            assert!((m1 - q1).abs() < 1e-8 * m1 && (m2 - q2).abs() < 1e-8 * m2, "alpha={a}");
        }
    }

    #[test]
    fn sharp_orientation_flips_at_half() {
        let grid = envelope_grid(1e-2, 1e2, 30);
        let lo = StableParams::one_sided(0.4).unwrap();
        let hi = StableParams::one_sided(0.7).unwrap();
        assert_eq!(sharp_envelope_check(&lo, &grid, &cfg()).unwrap().1, 1.0);
        assert_eq!(sharp_envelope_check(&hi, &grid, &cfg()).unwrap().1, -1.0);
        let low_alpha = StableParams::one_sided(0.3).unwrap();
        assert!(sharp_envelope_check(&low_alpha, &grid, &cfg()).unwrap_err().is_domain());
    }

    #[test]
    fn wrong_constants_are_reported() {
        let p = StableParams::one_sided(0.6).unwrap();
        let mut c = envelope_constants(&p, 40, &cfg()).unwrap();
        c.b_plus *= 0.9;
        let grid = envelope_grid(1e-2, 1e2, 30);
        assert!(matches!(check_envelope(&p, &c, &grid, &cfg()), Err(Error::EnvelopeViolation { .. })));
    }

    #[test]
    fn sampler_is_deterministic_and_exact_at_half() {
        let p = StableParams::one_sided(0.5).unwrap();
        let c = envelope_constants(&p, 40, &cfg()).unwrap();
        let a = sample_inverse_beta_power(&p, 2000, 7, &c, &cfg()).unwrap();
        let b = sample_inverse_beta_power(&p, 2000, 7, &c, &cfg()).unwrap();
        assert_eq!(a.samples, b.samples);
        assert!(a.acceptance_rate > 0.999);
        let d = ks_statistic(&p, &a.samples, &cfg()).unwrap();
        assert!(d * 2000f64.sqrt() < KS_CRITICAL_1PCT);
        assert!(a.to_csv().starts_with("x\n"));
    }
}
