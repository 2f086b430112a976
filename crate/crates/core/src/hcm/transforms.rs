//! Closure operations: multiplicative convolution, power tilting and the
//! Laplace transform of `G_alpha`.

use std::cell::RefCell;

use num_complex::Complex64;

use super::{check_point, on_cut};
use crate::boundary::boundary_value;
use crate::error::{Error, Result};
use crate::params::{QuadratureConfig, StableParams};
use crate::quadrature::integrate_half_line;
use crate::stable_core::{angular_quad, integrate_log_line};

/// `int_0^inf H(x y) g(y) dy`.
pub fn mult_convolve(
    h: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("mult_convolve needs x > 0, got {x}")));
    }
    integrate_log_line(|y| h(x * y) * g(y), cfg, "multiplicative convolution")
}

/// `x^beta_exp g(x) / m` with `m = int x^beta_exp g(x) dx`.
#[derive(Debug, Clone)]
pub struct TiltedDensity<F> {
    base: F,
    pub beta_exp: f64,
    pub m: f64,
}

impl<F: Fn(f64) -> f64> TiltedDensity<F> {
    pub fn density(&self, x: f64) -> f64 {
        if self.beta_exp == 0.0 {
            return (self.base)(x);
        }
        x.powf(self.beta_exp) * (self.base)(x) / self.m
    }
}

/// Tilts the density `g` by `x^beta_exp`; a divergent moment names its tail.
pub fn tilt_density<F: Fn(f64) -> f64>(g: F, beta_exp: f64, cfg: &QuadratureConfig) -> Result<TiltedDensity<F>> {
    let m = if beta_exp == 0.0 {
        1.0
    } else {
        integrate_log_line(|x| x.powf(beta_exp) * g(x), cfg, "tilting moment")?
    };
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Evaluation { x: f64::NAN });
    }
    Ok(TiltedDensity { base: g, beta_exp, m })
}

/// Relative distance from the cut below which the boundary value is used.
const NEAR_CUT: f64 = 1e-10;

/// Continuation of `int_0^inf e^(-z x) G_alpha(x) dx`.
///
/// Off the ray `(-inf, -delta]` this is `(1/pi) int A/(z + A) dphi`; on the
/// boundary `z = -r +- 0i` with `r > delta` it is
/// `-int_0^inf e^(-r t) G_alpha(-t-+) dt`, also used within a relative
/// distance `1e-10` of the cut. Points with `|z| <= delta` are
/// rejected unless `Re z > 0`.
pub fn laplace_of_g(p: &StableParams, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    p.require_one_sided("laplace_of_g")?;
    check_point(z)?;
    let delta = p.delta();
    if z.norm() <= delta && z.re <= 0.0 {
        return Err(Error::Domain(format!(
            "laplace_of_g is continued to |z| > delta = {delta}, got z = {z}"
        )));
    }
    let near_cut = z.re < -delta && z.im.abs() <= NEAR_CUT * z.norm();
    if on_cut(z) || near_cut {
        let upper = z.im.is_sign_positive();
        let v = boundary_laplace(p, -z.re, cfg)?;
        return Ok(if upper { v } else { v.conj() });
    }
    let extra: Vec<f64> = if -z.re > delta { vec![-z.re] } else { vec![] };
    let q = angular_quad(
        p,
        1.0 / z.norm(),
        &extra,
        |a| Complex64::new(a, 0.0) / (z + a),
        cfg,
        "Laplace transform of G",
    )?;
    Ok(q.value)
}

/// `-int_0^inf e^(-r t) conj(G(-t+)) dt`.
fn boundary_laplace(p: &StableParams, r: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let rate = r - p.delta();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |t: f64| -> Complex64 {
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match boundary_value(p, t, cfg) {
            Ok(s) => (s.scaled_value * (-rate * t).exp()).conj(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };
    let breaks = [1e-4, 1e-2, 0.1, 1.0, 1.0 / rate];
    let q = integrate_half_line(integrand, 0.0, &breaks, 1.0 / rate, cfg, "boundary Laplace integral");
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(-q?.value)
}

/// `int_0^inf e^(-s x) x^b G_alpha(x) dx / m_b` with `m_b = int x^b G_alpha`,
/// the Laplace transform of the tilted density, for real `s >= 0` and `b > -1`.
pub fn tilted_g_laplace(p: &StableParams, b: f64, s: f64, cfg: &QuadratureConfig) -> Result<f64> {
    p.require_one_sided("tilted_g_laplace")?;
    if !(b > -1.0) {
        return Err(Error::Divergence { tail: crate::error::Tail::Zero });
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("tilted_g_laplace needs s >= 0, got {s}")));
    }
    let scale = if s > 0.0 { 1.0 / s } else { 1.0 };
    let num = angular_quad(p, scale, &[], |a| a * (s + a).powf(-b - 1.0), cfg, "tilted Laplace transform")?;
    let den = angular_quad(p, 1.0, &[], |a| a.powf(-b), cfg, "tilting moment")?;
    Ok(num.value / den.value)
}
