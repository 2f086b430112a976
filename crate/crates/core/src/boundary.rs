//! Boundary values `G_alpha(-r+)` on the cut and the argument function `theta`.
//!
//! With `c = e^{i pi (1 - 2 alpha)}` the boundary value factors as
//! `G(-r+) = e^{delta r} S(r) / (2 i pi beta)`, where
//! `S(r) = int_0^inf [exp(-r f0(u)) - exp(-r (u + c u^alpha + delta))] du`
//! stays bounded, so the exponential growth is carried analytically.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::params::{QuadratureConfig, StableParams};
use crate::quadrature::integrate_half_line;
use crate::stable_core::{cexpm1, cis, eval_density, eval_g_real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub r: f64,
    /// `G(-r+)`; infinite once `e^{delta r}` overflows.
    pub value: Complex64,
    /// `e^{-delta r} G(-r+)`, always finite.
    pub scaled_value: Complex64,
    pub modulus: f64,
    pub log_modulus: f64,
    pub theta: f64,
    /// Relative quadrature error of the value.
    pub rel_error: f64,
}

/// `S(r)` and its absolute error estimate.
fn scaled_integral(p: &StableParams, r: f64, cfg: &QuadratureConfig) -> Result<(Complex64, f64)> {
    let alpha = p.alpha();
    let delta = p.delta();
    let c = cis(PI * (1.0 - 2.0 * alpha));
    let jump = Complex64::new(1.0, 0.0) + c;
    let integrand = |u: f64| -> Complex64 {
        let ua = u.powf(alpha);
        let q1 = Complex64::new(-r * (u - ua + delta), 0.0);
        let q2 = -(c * ua + u + delta) * r;
        let d = jump * (r * ua);
        if d.norm() <= 1.0 {
            q2.exp() * cexpm1(d)
        } else {
            q1.exp() - q2.exp()
        }
    };
    let t0 = p.t0();
    let width = 1.0 / (r * (1.0 - alpha) / t0).sqrt();
    let mut breaks = vec![t0, 1.0 / r, 10.0 / r];
    for k in [1.0, 3.0, 6.0, 10.0, 20.0] {
        breaks.push(t0 + k * width);
        if t0 - k * width > 0.0 {
            breaks.push(t0 - k * width);
        }
    }
    let scale = width.max(1.0 / r).max(t0);
    let q = integrate_half_line(integrand, 0.0, &breaks, scale, cfg, "boundary integral")?;
    Ok((q.value, q.error))
}

/// `G_alpha(-r+)` in polar form with the exponential factor carried separately.
pub fn boundary_value(p: &StableParams, r: f64, cfg: &QuadratureConfig) -> Result<BoundarySample> {
    p.require_one_sided("boundary values")?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("r = {r} must be positive and finite")));
    }
    cfg.validate()?;
    let (s, err) = scaled_integral(p, r, cfg)?;
    let den = Complex64::new(0.0, 2.0 * PI * p.beta());
    let scaled_value = s / den;
    let theta = 0.5 - s.arg() / PI;
    if !(scaled_value.im < 0.0) || !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Representation(format!(
            "boundary value at r = {r} has Im = {:.3e}, expected negative",
            scaled_value.im
        )));
    }
    let log_modulus = scaled_value.norm().ln() + p.delta() * r;
    let growth = (p.delta() * r).exp();
    Ok(BoundarySample {
        r,
        value: scaled_value * growth,
        scaled_value,
        modulus: log_modulus.exp(),
        log_modulus,
        theta,
        rel_error: err / s.norm(),
    })
}

/// `G_alpha(-r-)`, the mirror value below the cut.
pub fn boundary_value_below(p: &StableParams, r: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    Ok(boundary_value(p, r, cfg)?.value.conj())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaFunction {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    #[serde(rename = "theta")]
    pub theta_values: Vec<f64>,
    /// `log R(r)`; the modulus itself overflows for large `r`.
    pub log_modulus: Vec<f64>,
    #[serde(default)]
    pub rel_errors: Vec<f64>,
    pub left_limit: f64,
    pub right_limit: f64,
    /// Extrapolated values at `r -> 0` and `r -> inf`.
    #[serde(default)]
    pub left_extrapolated: f64,
    #[serde(default)]
    pub right_extrapolated: f64,
}

/// Nodes between which `theta` may not move by more than this.
pub const BRANCH_GUARD: f64 = 0.1;
/// Tolerance on linear interpolation of `theta` inside a cell.
pub const INTERP_TOL: f64 = 1e-6;
const MAX_NODES: usize = 40_000;

impl ThetaFunction {
    pub fn modulus(&self) -> Vec<f64> {
        self.log_modulus.iter().map(|l| l.exp()).collect()
    }

    /// Linear interpolation; outside the grid the declared limits apply.
    pub fn eval(&self, r: f64) -> f64 {
        let n = self.nodes.len();
        if r <= self.nodes[0] {
            return self.left_limit;
        }
        if r >= self.nodes[n - 1] {
            return self.right_limit;
        }
        let k = self.nodes.partition_point(|&x| x <= r) - 1;
        let (a, b) = (self.nodes[k], self.nodes[k + 1]);
        let w = (r - a) / (b - a);
        self.theta_values[k] * (1.0 - w) + self.theta_values[k + 1] * w
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,theta,modulus,log_modulus\n");
        for ((r, t), l) in self.nodes.iter().zip(&self.theta_values).zip(&self.log_modulus) {
            out.push_str(&format!("{r:e},{t:.15e},{:e},{l:.15e}\n", l.exp()));
        }
        out
    }

    pub fn from_csv(alpha: f64, text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut theta = Vec::new();
        let mut logm = Vec::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            let num = |j: usize| -> Result<f64> {
                cols.get(j)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Representation(format!("bad theta CSV line {}", i + 1)))
            };
            nodes.push(num(0)?);
            theta.push(num(1)?);
            logm.push(if cols.len() > 3 { num(3)? } else { num(2)?.ln() });
        }
        Self::from_parts(alpha, nodes, theta, logm)
    }

    /// Builds a function from tabulated values with the standard limits.
    pub fn from_parts(alpha: f64, nodes: Vec<f64>, theta: Vec<f64>, log_modulus: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != theta.len() {
            return Err(Error::Representation("theta table needs two or more matching rows".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || nodes[0] <= 0.0 {
            return Err(Error::Representation("theta nodes must be positive and increasing".into()));
        }
        let mut f = Self {
            alpha,
            rel_errors: vec![0.0; nodes.len()],
            nodes,
            theta_values: theta,
            log_modulus,
            left_limit: alpha,
            right_limit: 0.5,
            left_extrapolated: alpha,
            right_extrapolated: 0.5,
        };
        f.extrapolate();
        Ok(f)
    }

    fn extrapolate(&mut self) {
        let n = self.nodes.len();
        let pw = 1.0 - self.alpha;
        let (r1, r2) = (self.nodes[0], self.nodes[1]);
        let (t1, t2) = (self.theta_values[0], self.theta_values[1]);
        let (a, b) = (r1.powf(pw), r2.powf(pw));
        self.left_extrapolated = (t1 * b - t2 * a) / (b - a);
        let (r1, r2) = (self.nodes[n - 2], self.nodes[n - 1]);
        let (t1, t2) = (self.theta_values[n - 2], self.theta_values[n - 1]);
        self.right_extrapolated = (t2 * r2 - t1 * r1) / (r2 - r1);
    }

    pub fn is_nondecreasing(&self, tol: f64) -> bool {
        self.theta_values.windows(2).all(|w| w[1] >= w[0] - tol)
    }
}

fn sample_many(p: &StableParams, rs: &[f64], cfg: &QuadratureConfig) -> Result<Vec<BoundarySample>> {
    rs.par_iter().map(|&r| boundary_value(p, r, cfg)).collect()
}

/// Tabulates `theta` on a log grid over `[r_min, r_max]`, refined until the
/// branch guard and the interpolation tolerance hold.
pub fn theta_extract(p: &StableParams, r_min: f64, r_max: f64, cfg: &QuadratureConfig) -> Result<ThetaFunction> {
    theta_extract_with(p, r_min, r_max, 200, cfg)
}

pub fn theta_extract_with(
    p: &StableParams,
    r_min: f64,
    r_max: f64,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<ThetaFunction> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::Domain(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
    }
    let n = n.max(2);
    let ratio = (r_max / r_min).ln();
    let rs: Vec<f64> = (0..n)
        .map(|k| r_min * (ratio * k as f64 / (n - 1) as f64).exp())
        .collect();
    let mut samples = sample_many(p, &rs, cfg)?;
    let mut pending: Vec<(BoundarySample, BoundarySample)> =
        samples.windows(2).map(|w| (w[0], w[1])).collect();
    while !pending.is_empty() {
        let probes: Vec<f64> = pending.iter().map(|(a, b)| 0.5 * (a.r + b.r)).collect();
        let probe_vals = sample_many(p, &probes, cfg)?;
        let mut next = Vec::new();
        for ((a, b), m) in pending.iter().zip(probe_vals) {
            let jump = (b.theta - a.theta).abs() >= BRANCH_GUARD;
            let curved = (m.theta - 0.5 * (a.theta + b.theta)).abs() > INTERP_TOL;
            if !(jump || curved) || m.r <= a.r || m.r >= b.r {
                continue;
            }
            if samples.len() >= MAX_NODES {
                return Err(Error::Refinement { lo: a.r, hi: b.r });
            }
            samples.push(m);
            next.push((*a, m));
            next.push((m, *b));
        }
        pending = next;
    }
    samples.sort_by(|a, b| a.r.total_cmp(&b.r));
    if let Some(w) = samples.windows(2).find(|w| (w[1].theta - w[0].theta).abs() >= BRANCH_GUARD) {
        return Err(Error::Refinement { lo: w[0].r, hi: w[1].r });
    }
    let mut f = ThetaFunction::from_parts(
        p.alpha(),
        samples.iter().map(|s| s.r).collect(),
        samples.iter().map(|s| s.theta).collect(),
        samples.iter().map(|s| s.log_modulus).collect(),
    )?;
    f.rel_errors = samples.iter().map(|s| s.rel_error).collect();
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    pub delta: f64,
    pub t0: f64,
    pub c0: f64,
    pub c_inf: f64,
    #[serde(rename = "G_at_1")]
    pub g_at_1: f64,
    /// Extrapolated `lim r^alpha |G(-r+)|` at `r -> 0`.
    pub c0_numeric: f64,
    /// Extrapolated `lim r^(1/2) e^{-delta r} |G(-r+)|` at `r -> inf`.
    pub c_inf_numeric: f64,
}

/// `(1 - alpha) / Gamma(1 - alpha)`, the limit of `r^alpha |G(-r+)|`.
pub fn c0_formula(alpha: f64) -> f64 {
    (1.0 - alpha) / gamma(1.0 - alpha)
}

/// The same limit written as `Gamma(alpha + 1) sin(pi alpha) / (pi beta)`.
pub fn c0_reflection_form(alpha: f64) -> f64 {
    let beta = alpha / (1.0 - alpha);
    gamma(alpha + 1.0) * (PI * alpha).sin() / (PI * beta)
}

/// The constant with `2 pi beta` in the denominator, half of the true limit.
pub fn c0_half_form(alpha: f64) -> f64 {
    0.5 * c0_reflection_form(alpha)
}

pub fn c_inf_formula(alpha: f64) -> f64 {
    let beta = alpha / (1.0 - alpha);
    (2.0 * PI * beta).powf(-0.5) * alpha.powf(beta / 2.0)
}

/// Richardson extrapolation of `y(h)` at `h -> 0` for errors in powers of `h^q`.
fn richardson3(h: [f64; 3], y: [f64; 3], q: f64) -> f64 {
    // Fit y = c + a h^q + b h^{2q} through three points.
    let u: Vec<f64> = h.iter().map(|h| h.powf(q)).collect();
    let m = [
        [1.0, u[0], u[0] * u[0]],
        [1.0, u[1], u[1] * u[1]],
        [1.0, u[2], u[2] * u[2]],
    ];
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut mc = m;
    for i in 0..3 {
        mc[i][0] = y[i];
    }
    det(mc) / det(m)
}

/// Extrapolated limit of `r^alpha |G(-r+)|` at `r -> 0`.
pub fn c0_limit(p: &StableParams, cfg: &QuadratureConfig) -> Result<f64> {
    let rs: [f64; 3] = [1e-4, 2.5e-5, 6.25e-6];
    let mut y = [0.0; 3];
    for (i, &r) in rs.iter().enumerate() {
        y[i] = r.powf(p.alpha()) * boundary_value(p, r, cfg)?.modulus;
    }
    Ok(richardson3(rs, y, 1.0 - p.alpha()))
}

/// Extrapolated limit of `r^(1/2) e^{-delta r} |G(-r+)|` at `r -> inf`.
pub fn c_inf_limit(p: &StableParams, cfg: &QuadratureConfig) -> Result<f64> {
    let base = 200.0 / p.delta();
    let rs = [base, 2.0 * base, 4.0 * base];
    let mut y = [0.0; 3];
    for (i, &r) in rs.iter().enumerate() {
        y[i] = r.sqrt() * boundary_value(p, r, cfg)?.scaled_value.norm();
    }
    Ok(richardson3([1.0 / rs[0], 1.0 / rs[1], 1.0 / rs[2]], y, 1.0))
}

/// Constants of the small- and large-`x` asymptotics of `G_alpha`.
pub fn asymptotic_constants(p: &StableParams, cfg: &QuadratureConfig) -> Result<AsymptoticConstants> {
    p.require_one_sided("asymptotic constants")?;
    let c0 = c0_formula(p.alpha());
    let c_inf = c_inf_formula(p.alpha());
    let c0_numeric = c0_limit(p, cfg)?;
    let c_inf_numeric = c_inf_limit(p, cfg)?;
    if (c0_numeric / c0 - 1.0).abs() > 0.01 {
        return Err(Error::ConstantResolution {
            name: "c0",
            formula: c0,
            numeric: c0_numeric,
        });
    }
    if (c_inf_numeric / c_inf - 1.0).abs() > 0.01 {
        return Err(Error::ConstantResolution {
            name: "c_inf",
            formula: c_inf,
            numeric: c_inf_numeric,
        });
    }
    Ok(AsymptoticConstants {
        delta: p.delta(),
        t0: p.t0(),
        c0,
        c_inf,
        g_at_1: eval_g_real(p, 1.0, cfg)?,
        c0_numeric,
        c_inf_numeric,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedPart {
    pub r: f64,
    pub re: f64,
    pub im: f64,
}

/// `(r, r^alpha Re G(-r+), r^alpha Im G(-r+))` along the grid.
pub fn weighted_parts(p: &StableParams, r_grid: &[f64], cfg: &QuadratureConfig) -> Result<Vec<WeightedPart>> {
    if r_grid.is_empty() || r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("r grid must be nonempty and increasing".into()));
    }
    let samples = sample_many(p, r_grid, cfg)?;
    Ok(samples
        .iter()
        .map(|s| {
            let w = s.r.powf(p.alpha());
            WeightedPart {
                r: s.r,
                re: w * s.value.re,
                im: w * s.value.im,
            }
        })
        .collect())
}

/// Both sides of `r^alpha Re G(-r+) = (2 beta)^{-1} x^(alpha+1) g_{alpha,1-2alpha}(x)`, `x = r^(-1/beta)`.
pub fn cross_identity_sides(p: &StableParams, r: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let b = boundary_value(p, r, cfg)?;
    let lhs = r.powf(p.alpha()) * b.value.re;
    let x = r.powf(-1.0 / p.beta());
    let gamma = 1.0 - 2.0 * p.alpha();
    let g = if gamma == 0.0 {
        0.0
    } else {
        eval_density(&StableParams::new(p.alpha(), gamma)?, x, cfg)?
    };
    Ok((lhs, x.powf(p.alpha() + 1.0) * g / (2.0 * p.beta())))
}

/// Residual of the cross identity between boundary values and `g_{alpha,1-2alpha}`.
pub fn cross_check_identity(p: &StableParams, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (l, r) = cross_identity_sides(p, r, cfg)?;
    Ok(l - r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn half_boundary_closed_form() {
        let p = StableParams::one_sided(0.5).unwrap();
        for &r in &[0.05, 1.0, 7.0, 50.0, 3000.0] {
            let b = boundary_value(&p, r, &cfg()).unwrap();
            let want = -0.5 / (PI * r).sqrt();
            assert!((b.scaled_value.im / want - 1.0).abs() < 1e-10, "r={r}");
            assert!(b.scaled_value.re.abs() < 1e-10 * want.abs());
            assert!((b.theta - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn c0_forms_agree() {
        for &a in &[0.2, 0.5, 0.8] {
            assert!((c0_formula(a) / c0_reflection_form(a) - 1.0).abs() < 1e-12);
        }
        assert!((c0_formula(0.5) - c_inf_formula(0.5)).abs() < 1e-15);
    }

    #[test]
    fn richardson_exact_on_quadratic() {
        let h: [f64; 3] = [0.1, 0.05, 0.025];
        let y = h.map(|h: f64| 2.0 + 3.0 * h.sqrt() - h);
        assert!((richardson3(h, y, 0.5) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let f = ThetaFunction::from_parts(0.4, vec![0.1, 1.0, 10.0], vec![0.41, 0.45, 0.49], vec![0.0, -1.0, 2.0]).unwrap();
        let g = ThetaFunction::from_csv(0.4, &f.to_csv()).unwrap();
        assert_eq!(f.nodes, g.nodes);
        assert_eq!(f.theta_values, g.theta_values);
    }
}
