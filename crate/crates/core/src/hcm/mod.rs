//! Hyperbolically completely monotone functions in the form
//! `H(z) = c exp(-a z - b/z + int_0^inf (1/(z+t) - 1/(1+t)) theta(t) dt)`,
//! reconstruction of `G_alpha` from its boundary argument, numerical CM/HCM
//! probes and the closure operations (truncation, tilting, multiplicative
//! convolution, Laplace transform).

mod limits_serde;
mod probe;
mod transforms;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::ThetaFunction;
use crate::error::{Error, Result};
use crate::params::{QuadratureConfig, StableParams};
use crate::stable_core::{cpow, eval_g_complex, eval_g_real, integrate_log_line};

pub use probe::{cm_probe, geometric_grid, hcm_probe, hcm_probe_default, hcm_w_grid, CmProbeReport, Violation, HCM_U_GRID};
pub use transforms::{laplace_of_g, mult_convolve, tilt_density, tilted_g_laplace, TiltedDensity};
pub use probe::CERTIFY_FACTOR;

/// The function `theta` of the representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ThetaSpec {
    /// Piecewise linear through `(nodes[i], values[i])`; outside the nodes
    /// `theta` equals the declared limits.
    Table { nodes: Vec<f64>, values: Vec<f64> },
    Constant { value: f64 },
    /// `height * 1_{t >= at}`.
    Step { at: f64, height: f64 },
    /// `coef * t^exponent` with `|exponent| < 1`.
    Power { coef: f64, exponent: f64 },
    /// `inner` clamped to `[-n, n]`.
    Clamped { inner: Box<ThetaSpec>, n: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Constant,
    Nondecreasing,
    Nonincreasing,
    Neither,
}

impl ThetaSpec {
    pub fn from_theta_function(tf: &ThetaFunction) -> Self {
        ThetaSpec::Table {
            nodes: tf.nodes.clone(),
            values: tf.theta_values.clone(),
        }
    }

    /// `theta(t)`; tables need their limits for `t` outside the nodes.
    pub fn eval(&self, t: f64, limits: [f64; 2]) -> f64 {
        match self {
            ThetaSpec::Table { nodes, values } => {
                if nodes.is_empty() || t < nodes[0] {
                    return limits[0];
                }
                if t > nodes[nodes.len() - 1] {
                    return limits[1];
                }
                let k = nodes.partition_point(|&n| n <= t).min(nodes.len() - 1).max(1);
                let (a, b) = (nodes[k - 1], nodes[k]);
                let w = if b > a { (t - a) / (b - a) } else { 0.0 };
                values[k - 1] + w * (values[k] - values[k - 1])
            }
            ThetaSpec::Constant { value } => *value,
            ThetaSpec::Step { at, height } => {
                if t >= *at {
                    *height
                } else {
                    0.0
                }
            }
            ThetaSpec::Power { coef, exponent } => coef * t.powf(*exponent),
            ThetaSpec::Clamped { inner, n } => inner.eval(t, limits).clamp(-n, *n),
        }
    }

    /// Limits at `0+` and `+inf` implied by a closed form; `None` for tables.
    pub fn implied_limits(&self) -> Option<[f64; 2]> {
        match self {
            ThetaSpec::Table { .. } => None,
            ThetaSpec::Constant { value } => Some([*value, *value]),
            ThetaSpec::Step { height, .. } => Some([0.0, *height]),
            ThetaSpec::Power { coef, exponent } => {
                let big = coef.signum() * f64::INFINITY;
                if *exponent > 0.0 {
                    Some([0.0, big])
                } else if *exponent < 0.0 {
                    Some([big, 0.0])
                } else {
                    Some([*coef, *coef])
                }
            }
            ThetaSpec::Clamped { inner, n } => inner
                .implied_limits()
                .map(|[l0, l1]| [l0.clamp(-n, *n), l1.clamp(-n, *n)]),
        }
    }

    pub fn monotonicity(&self, tol: f64) -> Monotonicity {
        match self {
            ThetaSpec::Table { values, .. } => {
                let up = values.windows(2).all(|w| w[1] >= w[0] - tol);
                let down = values.windows(2).all(|w| w[1] <= w[0] + tol);
                match (up, down) {
                    (true, true) => Monotonicity::Constant,
                    (true, false) => Monotonicity::Nondecreasing,
                    (false, true) => Monotonicity::Nonincreasing,
                    (false, false) => Monotonicity::Neither,
                }
            }
            ThetaSpec::Constant { .. } => Monotonicity::Constant,
            ThetaSpec::Step { height, .. } | ThetaSpec::Power { coef: height, .. } => {
                let slope = match self {
                    ThetaSpec::Power { exponent, .. } => height * exponent,
                    _ => *height,
                };
                if slope > 0.0 {
                    Monotonicity::Nondecreasing
                } else if slope < 0.0 {
                    Monotonicity::Nonincreasing
                } else {
                    Monotonicity::Constant
                }
            }
            ThetaSpec::Clamped { inner, .. } => inner.monotonicity(tol),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ThetaSpec::Table { nodes, values } => {
                if nodes.len() != values.len() || nodes.is_empty() {
                    return Err(Error::Representation(
                        "theta table needs equally many nodes and values, at least one".into(),
                    ));
                }
                if nodes[0] <= 0.0 || nodes.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Representation(
                        "theta table nodes must be positive and strictly increasing".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Representation("theta table has non-finite values".into()));
                }
            }
            ThetaSpec::Constant { value } if !value.is_finite() => {
                return Err(Error::Representation("constant theta must be finite".into()));
            }
            ThetaSpec::Step { at, height } if !(*at >= 0.0 && height.is_finite()) => {
                return Err(Error::Representation("step theta needs at >= 0 and a finite height".into()));
            }
            ThetaSpec::Power { coef, exponent } if !(coef.is_finite() && exponent.abs() < 1.0) => {
                return Err(Error::Representation(format!(
                    "power theta t^{exponent} fails int min(1, t^-2)|theta| < inf"
                )));
            }
            ThetaSpec::Clamped { inner, n } => {
                if !(*n > 0.0) {
                    return Err(Error::Representation("clamp level must be positive".into()));
                }
                inner.validate()?;
            }
            _ => {}
        }
        Ok(())
    }
}

/// `Log(z + t)` keeping the sign of a zero imaginary part, so that `z = -r +- 0i`
/// selects the upper or lower boundary value. The log singularity at
/// `z + t = 0` is dropped: it cancels between neighbouring cells.
fn log_shift(z: Complex64, t: f64) -> Complex64 {
    let w = Complex64::new(z.re + t, z.im);
    if w.re == 0.0 && w.im == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        w.ln()
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

fn check_point(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) || (z.re == 0.0 && z.im == 0.0) {
        return Err(Error::Domain(format!("cannot evaluate at z = {z}")));
    }
    Ok(())
}

/// `int_0^inf (1/(z+t) - 1/(1+t)) theta(t) dt`, the logarithm of
/// [`exp_stieltjes`]. On the negative axis the sign of `z.im` (including a
/// signed zero) picks the boundary value from above or below.
pub fn stieltjes_integral(
    theta: &ThetaSpec,
    limits: Option<[f64; 2]>,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    check_point(z)?;
    theta.validate()?;
    let log_z = log_shift(z, 0.0);
    Ok(match theta {
        ThetaSpec::Table { nodes, values } => {
            let [l0, l1] = limits
                .filter(|l| l[0].is_finite() && l[1].is_finite())
                .ok_or_else(|| Error::Representation("a theta table needs finite declared limits".into()))?;
            let first = nodes[0];
            let last = nodes[nodes.len() - 1];
            let mut sum = (log_shift(z, first) - log_z - first.ln_1p()) * l0;
            for k in 1..nodes.len() {
                let (a, b) = (nodes[k - 1], nodes[k]);
                let q = (values[k] - values[k - 1]) / (b - a);
                let p = values[k - 1] - q * a;
                let ln_ratio = ((b - a) / (1.0 + a)).ln_1p();
                sum += (Complex64::new(p, 0.0) - z * q) * (log_shift(z, b) - log_shift(z, a)) - (p - q) * ln_ratio;
            }
            sum + (Complex64::new(last.ln_1p(), 0.0) - log_shift(z, last)) * l1
        }
        ThetaSpec::Constant { value } => -log_z * *value,
        ThetaSpec::Step { at, height } => (Complex64::new(at.ln_1p(), 0.0) - log_shift(z, *at)) * *height,
        ThetaSpec::Power { coef, exponent } => {
            if *exponent == 0.0 {
                -log_z * *coef
            } else {
                (Complex64::new(1.0, 0.0) - cpow(z, *exponent)) * (coef * PI / (PI * exponent).sin())
            }
        }
        ThetaSpec::Clamped { .. } => {
            if on_cut(z) {
                return Err(Error::Domain("clamped theta is only evaluated off the cut".into()));
            }
            let l = limits.or_else(|| theta.implied_limits()).unwrap_or([0.0, 0.0]);
            integrate_log_line(
                |t| (Complex64::new(1.0 - z.re, -z.im) / (Complex64::new(z.re + t, z.im) * (1.0 + t))) * theta.eval(t, l),
                cfg,
                "clamped exponential-Stieltjes integral",
            )?
        }
    })
}

/// `exp int_0^inf (1/(z+t) - 1/(1+t)) theta(t) dt`.
pub fn exp_stieltjes(
    theta: &ThetaSpec,
    limits: Option<[f64; 2]>,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    Ok(stieltjes_integral(theta, limits, z, cfg)?.exp())
}

/// Data `(c, a, b, theta)` with the limits of `theta` at `0+` and `+inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcmRepresentation {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub theta: ThetaSpec,
    #[serde(with = "limits_serde")]
    pub limits: [f64; 2],
}

impl HcmRepresentation {
    /// A representation with a closed-form `theta`; limits are implied.
    pub fn new(c: f64, a: f64, b: f64, theta: ThetaSpec) -> Result<Self> {
        let limits = theta
            .implied_limits()
            .ok_or_else(|| Error::Representation("a theta table needs declared limits".into()))?;
        Self::with_limits(c, a, b, theta, limits)
    }

    pub fn with_limits(c: f64, a: f64, b: f64, theta: ThetaSpec, limits: [f64; 2]) -> Result<Self> {
        let rep = Self { c, a, b, theta, limits };
        rep.validate()?;
        Ok(rep)
    }

    /// `theta` taken from an extracted boundary argument with `c = 1`, `a = b = 0`.
    pub fn from_theta_function(tf: &ThetaFunction) -> Result<Self> {
        Self::with_limits(
            1.0,
            0.0,
            0.0,
            ThetaSpec::from_theta_function(tf),
            [tf.left_limit, tf.right_limit],
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite() && self.a >= 0.0 && self.b >= 0.0) {
            return Err(Error::Representation(format!(
                "need c > 0, a >= 0, b >= 0; got c = {}, a = {}, b = {}",
                self.c, self.a, self.b
            )));
        }
        self.theta.validate()
    }

    pub fn is_hcm_candidate(&self) -> bool {
        matches!(
            self.theta.monotonicity(0.0),
            Monotonicity::Nondecreasing | Monotonicity::Constant
        )
    }

    pub fn is_anti_hcm_candidate(&self) -> bool {
        matches!(
            self.theta.monotonicity(0.0),
            Monotonicity::Nonincreasing | Monotonicity::Constant
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("representation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rep: Self = serde_json::from_str(text).map_err(|e| Error::Representation(e.to_string()))?;
        rep.validate()?;
        Ok(rep)
    }
}

/// `H(z)` for the representation; `z` may also be a boundary point `-r +- 0i`.
pub fn eval_hcm(rep: &HcmRepresentation, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    rep.validate()?;
    let s = stieltjes_integral(&rep.theta, Some(rep.limits), z, cfg)?;
    let mut expo = s - z * rep.a;
    if rep.b != 0.0 {
        expo -= z.inv() * rep.b;
    }
    Ok(expo.exp() * rep.c)
}

/// Relative tolerance of the reconstruction against direct evaluation.
pub const ROUND_TRIP_TOL: f64 = 1e-4;

/// `G_alpha(1) e^(-delta (z-1)) exp_stieltjes(theta, z)` without cross-checking.
pub fn reconstruct_g_raw(
    p: &StableParams,
    theta: &ThetaFunction,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    p.require_one_sided("reconstruct_g")?;
    if (theta.alpha - p.alpha()).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "theta was extracted for alpha = {}, not {}",
            theta.alpha,
            p.alpha()
        )));
    }
    let g1 = eval_g_real(p, 1.0, cfg)?;
    let spec = ThetaSpec::from_theta_function(theta);
    let s = stieltjes_integral(&spec, Some([theta.left_limit, theta.right_limit]), z, cfg)?;
    Ok((s - (z - 1.0) * p.delta()).exp() * g1)
}

/// Reconstruction of `G_alpha(z)` from `theta`, checked against direct
/// evaluation to [`ROUND_TRIP_TOL`] times ten.
pub fn reconstruct_g(
    p: &StableParams,
    theta: &ThetaFunction,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let rec = reconstruct_g_raw(p, theta, z, cfg)?;
    let direct = eval_g_complex(p, z, cfg)?;
    let allowed = 10.0 * ROUND_TRIP_TOL * direct.norm();
    if (rec - direct).norm() > allowed {
        return Err(Error::CrossValidation {
            what: format!("reconstruction of G at z = {z}"),
            first: rec.norm(),
            second: direct.norm(),
            allowed,
        });
    }
    Ok(rec)
}

/// Smallest `t` (on a log scale) at which the nondecreasing `theta` exceeds `level`.
fn first_crossing(theta: &ThetaSpec, limits: [f64; 2], level: f64) -> f64 {
    let (mut lo, mut hi) = (-700.0f64, 700.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if theta.eval(mid.exp(), limits) > level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.exp()
}

/// Clamps `theta` to `[-n, n]`. Returns the truncated representation and
/// `(eps_n, eps_hat_n)` with `eps_n = int (theta - n)_+ t^-2 dt` and
/// `eps_hat_n = int (-n - theta)_+ dt`, which control
/// `(1 - eps) H <= H_n <= H e^(eps (x + 1/x))`, `eps = max(eps_n, eps_hat_n)`.
pub fn truncate_theta(rep: &HcmRepresentation, n: f64, cfg: &QuadratureConfig) -> Result<(HcmRepresentation, (f64, f64))> {
    rep.validate()?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain(format!("truncation level n = {n} must be positive and finite")));
    }
    if !rep.is_hcm_candidate() {
        return Err(Error::Precondition("truncate_theta needs a nondecreasing theta".into()));
    }
    let [l0, l1] = rep.limits;
    let sup = match &rep.theta {
        ThetaSpec::Table { values, .. } => values.iter().fold(l0.abs().max(l1.abs()), |m, v| m.max(v.abs())),
        _ => l0.abs().max(l1.abs()),
    };
    if sup <= n {
        return Ok((rep.clone(), (0.0, 0.0)));
    }
    let theta = |t: f64| rep.theta.eval(t, rep.limits);
    let eps_n = if l1 > n {
        let s_max = 1.0 / first_crossing(&rep.theta, rep.limits, n);
        crate::quadrature::integrate(
            |s: f64| if s > 0.0 { (theta(1.0 / s) - n).max(0.0) } else { 0.0 },
            0.0,
            s_max,
            cfg,
            "truncation excess at infinity",
        )?
        .value
    } else {
        0.0
    };
    let eps_hat_n = if l0 < -n {
        let t_max = first_crossing(&rep.theta, rep.limits, -n);
        crate::quadrature::integrate(
            |t: f64| (-n - theta(t)).max(0.0),
            0.0,
            t_max,
            cfg,
            "truncation excess at zero",
        )?
        .value
    } else {
        0.0
    };
    let clamped = HcmRepresentation {
        theta: ThetaSpec::Clamped {
            inner: Box::new(rep.theta.clone()),
            n,
        },
        limits: [l0.clamp(-n, n), l1.clamp(-n, n)],
        ..rep.clone()
    };
    Ok((clamped, (eps_n, eps_hat_n)))
}

/// `u` values of [`hcm_probe_g`]; large `u` isolates the far part of `theta`.
pub const G_PROBE_U_GRID: [f64; 7] = [0.25, 1.0, 4.0, 25.0, 50.0, 100.0, 200.0];

/// HCM probe of `G_alpha` through `e^(delta x) G_alpha(x)`, which has the same
/// `theta`. Order 6 on `w = 2, 4, ..., 60`; the noise floor is the largest
/// relative quadrature error met, but at least `1e-12`. Quadrature runs at
/// `1e-3` of the requested relative tolerance.
pub fn hcm_probe_g(p: &StableParams, cfg: &QuadratureConfig) -> Result<CmProbeReport> {
    use std::sync::atomic::{AtomicU64, Ordering};
    p.require_one_sided("hcm_probe_g")?;
    let cfg = &cfg.tightened(1e-3);
    let worst = AtomicU64::new(0f64.to_bits());
    let f = |x: f64| {
        let q = crate::stable_core::eval_g_scaled(p, x, cfg)?;
        let rel = q.error / q.value.abs();
        worst.fetch_max(rel.to_bits(), Ordering::Relaxed);
        Ok(q.value)
    };
    let w: Vec<f64> = (0..30).map(|j| 2.0 + 2.0 * j as f64).collect();
    let mut noise = 1e-12;
    loop {
        let report = hcm_probe(f, &G_PROBE_U_GRID, &w, 6, noise)?;
        let seen = f64::from_bits(worst.load(Ordering::Relaxed));
        if seen <= noise {
            return Ok(report);
        }
        noise = seen;
    }
}
