//! Densities of one-sided stable laws and of the transformed variable
//! `S_alpha^(-beta)`.
//!
//! Two integral families are used. The oscillatory family is built on the
//! entire function `F(w) = int_0^inf exp(-t - w t^alpha) dt`, integrated
//! along a rotated ray so the oscillations become decay. The one-sided
//! family uses Zolotarev's angular form
//! `G(x) = (1/pi) int_0^pi A(phi) exp(-x A(phi)) dphi`, which involves no
//! cancellation at all.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result, Tail};
use crate::params::{QuadratureConfig, StableParams};
use crate::quadrature::{integrate_half_line, integrate_partition, Quad, QuadValue};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Principal power `z^a`, with `0^a = 0`.
pub(crate) fn cpow(z: Complex64, a: f64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    (z.ln() * a).exp()
}

/// `exp(z) - 1` without cancellation for small `z`.
pub(crate) fn cexpm1(z: Complex64) -> Complex64 {
    let s = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * s * s,
        z.re.exp() * z.im.sin(),
    )
}

/// Which variable the entire function is integrated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    /// `int exp(-t - w t^alpha) dt`
    Plain,
    /// `u = t^alpha`: `(1/alpha) int exp(-u^(1/alpha) - w u) u^(1/alpha - 1) du`
    Power,
}

fn f_series(alpha: f64, w: Complex64) -> Option<Quad<Complex64>> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for n in 0..400 {
        let nf = n as f64;
        let coef = (ln_gamma(nf * alpha + 1.0) - ln_gamma(nf + 1.0)).exp();
        let term = pow * coef;
        sum += term;
        if n > 2 && term.norm() <= 1e-17 * sum.norm() {
            return Some(Quad {
                value: sum,
                error: term.norm() + 1e-16 * sum.norm(),
                evals: n,
            });
        }
        pow *= -w;
    }
    None
}

/// `F(w) = int_0^inf exp(-t - w t^alpha) dt` for any complex `w`.
pub fn entire_f(alpha: f64, w: Complex64, cfg: &QuadratureConfig) -> Result<Quad<Complex64>> {
    if w.norm() <= 0.5 {
        if let Some(q) = f_series(alpha, w) {
            return Ok(q);
        }
    }
    entire_f_by(alpha, w, Substitution::Plain, cfg)
}

/// Ray-rotated quadrature of `F` in the chosen variable.
pub fn entire_f_by(
    alpha: f64,
    w: Complex64,
    sub: Substitution,
    cfg: &QuadratureConfig,
) -> Result<Quad<Complex64>> {
    // Ray angle limit: the dominant term must still decay along the ray.
    let limit = match sub {
        Substitution::Plain => 0.45 * PI,
        Substitution::Power => 0.45 * PI * alpha,
    };
    let integrand = |phi: f64, s: f64| -> Complex64 {
        let ray = cis(phi);
        match sub {
            Substitution::Plain => {
                (-ray * s - w * cis(alpha * phi) * s.powf(alpha)).exp() * ray
            }
            Substitution::Power => {
                let u = ray * s;
                let v = cpow(u, 1.0 / alpha);
                (-v - w * u).exp() * (v / u) * ray / alpha
            }
        }
    };
    // Pick the ray that minimises a coarse estimate of int |integrand|.
    let mut best = (f64::INFINITY, 0.0);
    for k in -8..=8 {
        let phi = limit * k as f64 / 8.0;
        let mut mass = 0.0;
        for j in 0..80 {
            let s = (-14.0 + 19.0 * j as f64 / 79.0).exp();
            mass += integrand(phi, s).norm() * s;
        }
        if mass.is_finite() && mass < best.0 {
            best = (mass, phi);
        }
    }
    let phi = best.1;
    let natural = match sub {
        Substitution::Plain => w.norm().powf(-1.0 / alpha),
        Substitution::Power => 1.0 / w.norm().max(1e-300),
    };
    let mut breaks = vec![1.0];
    if natural < 1.0 && natural > 1e-300 {
        breaks.push(natural);
        breaks.push(10.0 * natural);
    }
    breaks.push(4.0);
    integrate_half_line(|s| integrand(phi, s), 0.0, &breaks, 4.0, cfg, "entire function F")
}

/// Zolotarev's angular function for `S_alpha^(-beta)`.
pub fn kanter_a(alpha: f64, phi: f64) -> f64 {
    kanter_a_split(alpha, phi.min(PI - phi), phi > 0.5 * PI)
}

/// `A(phi)` at `phi = s` (`upper = false`) or `phi = pi - s` (`upper = true`),
/// keeping full precision near both ends.
fn kanter_a_split(alpha: f64, s: f64, upper: bool) -> f64 {
    let b = alpha / (1.0 - alpha);
    let (sa, sb) = if upper {
        ((alpha * (PI - s)).sin(), ((1.0 - alpha) * (PI - s)).sin())
    } else {
        ((alpha * s).sin(), ((1.0 - alpha) * s).sin())
    };
    (b * sa.ln() + sb.ln() - s.sin().ln() / (1.0 - alpha)).exp()
}

/// Offset `s` on one half of `(0, pi)` at which `A` reaches `level`.
fn kanter_level(alpha: f64, level: f64, upper: bool) -> Option<f64> {
    let mid = kanter_a_split(alpha, 0.5 * PI, false);
    let (lo_val, hi_val) = if upper { (mid, f64::INFINITY) } else { (0.0, mid) };
    if !(level > lo_val && level < hi_val) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, 0.5 * PI);
    for _ in 0..200 {
        let m = if upper { (lo * hi).sqrt().max(0.5 * hi) } else { 0.5 * (lo + hi) };
        let m = if upper && lo == 0.0 { 0.5 * hi } else { m };
        let a = kanter_a_split(alpha, m, upper);
        // A decreases in s on the upper half, increases on the lower half.
        let go_up = if upper { a > level } else { a < level };
        if go_up {
            lo = m;
        } else {
            hi = m;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `(1/pi) int_0^pi h(A(phi)) dphi` with breakpoints where `x (A - delta)` changes scale.
fn kanter_quad(
    p: &StableParams,
    x: f64,
    h: impl Fn(f64) -> f64,
    cfg: &QuadratureConfig,
    what: &str,
) -> Result<Quad<f64>> {
    angular_quad(p, x, &[], h, cfg, what)
}

/// `(1/pi) int_0^pi h(A(phi)) dphi`; `x` sets the scale of the breakpoints
/// and `extra_levels` adds breakpoints where `A` crosses given values.
pub fn angular_quad<T: QuadValue>(
    p: &StableParams,
    x: f64,
    extra_levels: &[f64],
    h: impl Fn(f64) -> T,
    cfg: &QuadratureConfig,
    what: &str,
) -> Result<Quad<T>> {
    let alpha = p.alpha();
    let mut levels: Vec<f64> = [0.05, 0.5, 2.0, 8.0, 30.0, 100.0]
        .iter()
        .map(|l| p.delta() + l / x)
        .collect();
    levels.extend_from_slice(extra_levels);
    let mut total = T::zero();
    let mut error = 0.0;
    let mut evals = 0;
    for upper in [false, true] {
        let mut pts = vec![0.0, 0.5 * PI];
        pts.extend(levels.iter().filter_map(|&l| kanter_level(alpha, l, upper)));
        if upper {
            // Algebraic decay of A between the last level and pi/2.
            let mut s = pts[2..].iter().cloned().fold(0.5 * PI, f64::min);
            while s < 0.5 * PI {
                pts.push(s);
                s *= 4.0;
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let q = integrate_partition(
            |s: f64| {
                let a = kanter_a_split(alpha, s, upper);
                if !a.is_finite() {
                    return T::zero();
                }
                h(a)
            },
            &pts,
            cfg,
            what,
        )?;
        total = total + q.value;
        error += q.error;
        evals += q.evals;
    }
    Ok(Quad {
        value: total * (1.0 / PI),
        error: error / PI,
        evals,
    })
}

/// `exp(delta x) G_alpha(x)`, computed from the angular form.
pub fn eval_g_scaled(p: &StableParams, x: f64, cfg: &QuadratureConfig) -> Result<Quad<f64>> {
    p.require_one_sided("the scaled density of S^(-beta)")?;
    check_positive(x, "x")?;
    let d = p.delta();
    kanter_quad(
        p,
        x,
        |a| {
            let e = x * (a - d);
            if e > 745.0 {
                0.0
            } else {
                a * (-e).exp()
            }
        },
        cfg,
        "angular form of G",
    )
}

/// `G_alpha(x)` from the angular form alone (no cross-validation).
pub fn eval_g_angular(p: &StableParams, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let q = eval_g_scaled(p, x, cfg)?;
    Ok(q.value * (-p.delta() * x).exp())
}

/// `P(S^(-beta) <= x)` from the angular form.
pub fn cdf_inverse_power(p: &StableParams, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    p.require_one_sided("the distribution function of S^(-beta)")?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    // 1 - (1/pi) int exp(-x A) = (1/pi) int -expm1(-x A)
    let q = kanter_quad(p, x, |a| -(-x * a).exp_m1(), cfg, "distribution of S^(-beta)")?;
    Ok(q.value.clamp(0.0, 1.0))
}

fn check_positive(v: f64, name: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} must be positive and finite")))
    }
}

/// Stable density from the oscillatory representation: `Im F(r^-alpha e^{-i pi gamma}) / (pi r)`.
pub fn density_oscillatory(
    p: &StableParams,
    r: f64,
    sub: Substitution,
    cfg: &QuadratureConfig,
) -> Result<Quad<f64>> {
    check_positive(r, "r")?;
    let w = cis(-PI * p.gamma()) * r.powf(-p.alpha());
    let q = match sub {
        Substitution::Plain => entire_f(p.alpha(), w, cfg)?,
        Substitution::Power => entire_f_by(p.alpha(), w, sub, cfg)?,
    };
    Ok(Quad {
        value: q.value.im / (PI * r),
        error: q.error / (PI * r),
        evals: q.evals,
    })
}

/// Natural log of the smallest positive subnormal double.
const UNDERFLOW_LOG: f64 = -745.2;

/// Density `g_{alpha,gamma}(r)` for the Laplace exponent `lambda^alpha`.
///
/// One-sided parameters use the angular form; other asymmetries use the
/// oscillatory integral.
pub fn eval_density(p: &StableParams, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_positive(r, "r")?;
    cfg.validate()?;
    if p.is_one_sided() {
        let x = r.powf(-p.beta());
        if x == 0.0 || !x.is_finite() {
            return density_oscillatory(p, r, Substitution::Plain, cfg).map(|q| q.value);
        }
        let log_prefactor = p.beta().ln() + x.ln() / p.alpha();
        // Here delta x > 745, where e^(delta x) G < e^5, so the density underflows.
        if log_prefactor + 5.0 - p.delta() * x < UNDERFLOW_LOG {
            return Ok(0.0);
        }
        let g = eval_g_angular(p, x, cfg)?;
        return Ok(p.beta() * x.powf(1.0 / p.alpha()) * g);
    }
    density_oscillatory(p, r, Substitution::Plain, cfg).map(|q| q.value)
}

/// Tail mass `int_x^inf g_{alpha,gamma}(y) dy`: the angular form for the
/// one-sided law, [`tail_oscillatory`] otherwise.
pub fn eval_tail(p: &StableParams, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_positive(x, "x")?;
    cfg.validate()?;
    if p.is_one_sided() {
        return tail_angular(p, x, cfg);
    }
    tail_oscillatory(p, x, cfg)
}

/// Tail mass from the `dt/t` representation on a rotated ray.
pub fn tail_oscillatory(p: &StableParams, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_positive(x, "x")?;
    let alpha = p.alpha();
    let c = cis(-PI * p.gamma());
    let integrand = |phi: f64, s: f64| -> Complex64 {
        let t = cis(phi) * s;
        let a = -t * x - c * cpow(t, alpha);
        let b = -t;
        if a.norm() < 1.0 && b.norm() < 1.0 {
            (cexpm1(a) - cexpm1(b)) / s
        } else {
            (a.exp() - b.exp()) / s
        }
    };
    let limit = 0.45 * PI;
    let mut best = (f64::INFINITY, 0.0);
    for k in -8..=8 {
        let phi = limit * k as f64 / 8.0;
        let mut mass = 0.0;
        for j in 0..80 {
            let s = (-14.0 + 24.0 * j as f64 / 79.0).exp();
            mass += integrand(phi, s).norm() * s;
        }
        if mass.is_finite() && mass < best.0 {
            best = (mass, phi);
        }
    }
    let phi = best.1;
    let mut breaks = vec![1.0, 1.0 / x];
    breaks.push(10.0 / x);
    let q = integrate_half_line(
        |s| integrand(phi, s),
        0.0,
        &breaks,
        (1.0f64).max(1.0 / x),
        cfg,
        "tail integral",
    )?;
    Ok(q.value.im / PI)
}

/// Tail of the one-sided law from the angular form, `P(S > y)`.
pub fn tail_angular(p: &StableParams, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    p.require_one_sided("the angular tail")?;
    check_positive(y, "y")?;
    let x = y.powf(-p.beta());
    let q = kanter_quad(p, x, |a| -(-x * a).exp_m1(), cfg, "angular tail")?;
    Ok(q.value)
}

/// Which formula family produced the cross-check of [`eval_g_real_detailed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    /// Both routes are direct quadratures of the entire-function representation.
    Direct,
    /// Large `x`: the cross-check goes through the saddle contour.
    Contour,
}

#[derive(Debug, Clone, Copy)]
pub struct GEvaluation {
    pub value: f64,
    pub check: f64,
    pub regime: Regime,
    pub allowed: f64,
}

fn g_from_f(p: &StableParams, z: Complex64, cfg: &QuadratureConfig) -> Result<(Complex64, f64, f64)> {
    let alpha = p.alpha();
    let zp = cpow(z, 1.0 - alpha);
    let f1 = entire_f(alpha, cis(-PI * alpha) * zp, cfg)?;
    let f2 = entire_f(alpha, cis(PI * alpha) * zp, cfg)?;
    let diff = f1.value - f2.value;
    let pref = (2.0 * I * PI * p.beta() * z).inv();
    let cond = (f1.value.norm() + f2.value.norm()) / diff.norm().max(f64::MIN_POSITIVE);
    let err = (f1.error + f2.error + 1e-16 * (f1.value.norm() + f2.value.norm())) * pref.norm();
    Ok((pref * diff, err, cond))
}

/// Beyond `delta * Re z` of this size the entire-function route loses
/// relative accuracy and the saddle contour takes over.
const DIRECT_DECAY_LIMIT: f64 = 5.0;

/// Density of `S_alpha^(-beta)` with the two-route cross-check exposed.
pub fn eval_g_real_detailed(p: &StableParams, x: f64, cfg: &QuadratureConfig) -> Result<GEvaluation> {
    p.require_one_sided("G_alpha")?;
    check_positive(x, "x")?;
    cfg.validate()?;
    let scaled = eval_g_scaled(p, x, cfg)?;
    let damp = (-p.delta() * x).exp();
    let value = scaled.value * damp;
    let err_a = scaled.error * damp;
    let (check, err_b, regime) = {
        let (g, err, cond) = g_from_f(p, Complex64::new(x, 0.0), cfg)?;
        if cond < 1e3 && p.delta() * x <= DIRECT_DECAY_LIMIT {
            (g.re, err, Regime::Direct)
        } else {
            let q = crate::saddle::contour_integral(p, Complex64::new(x, 0.0), 1.0, cfg)?;
            (q.value.re, q.error, Regime::Contour)
        }
    };
    let allowed = 10.0 * (err_a + err_b + cfg.rel_tol * value.abs()) + f64::MIN_POSITIVE;
    if !(value - check).abs().le(&allowed) {
        return Err(Error::CrossValidation {
            what: format!("G_alpha({x}) for alpha = {}", p.alpha()),
            first: value,
            second: check,
            allowed,
        });
    }
    Ok(GEvaluation {
        value,
        check,
        regime,
        allowed,
    })
}

/// Density of `S_alpha^(-beta)` at `x > 0`, cross-validated by a second route.
pub fn eval_g_real(p: &StableParams, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    eval_g_real_detailed(p, x, cfg).map(|e| e.value)
}

/// Admissible contour angle closest to the steepest direction for `z` in the closed upper half-plane.
pub(crate) fn contour_angle(p: &StableParams, z: Complex64) -> f64 {
    let psi = z.arg().max(0.0);
    let lower = (0.5 - p.alpha()).max(0.0) + 0.02;
    (1.0 - psi / PI).clamp(lower, 1.0)
}

/// Analytic continuation of `G_alpha` to the plane cut along `(-inf, 0]`.
pub fn eval_g_complex(p: &StableParams, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    p.require_one_sided("G_alpha")?;
    cfg.validate()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("z = {z} is not finite")));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Domain(format!("z = {z} lies on the cut (-inf, 0]")));
    }
    if z.im < 0.0 {
        return eval_g_complex(p, z.conj(), cfg).map(|g| g.conj());
    }
    let (g, _, cond) = g_from_f(p, z, cfg)?;
    if cond < 1e4 && p.delta() * z.re <= DIRECT_DECAY_LIMIT {
        return Ok(g);
    }
    let theta = contour_angle(p, z);
    if (z * cis(PI * theta)).re < 0.0 {
        return crate::saddle::contour_integral(p, z, theta, cfg).map(|q| q.value);
    }
    Ok(g)
}

/// `g_{1,gamma}`: the degenerate case of the oscillatory integral.
pub fn density_alpha_one(gamma: f64, x: f64) -> f64 {
    let (s, c) = (PI * gamma).sin_cos();
    s / (PI * ((x + c).powi(2) + s * s))
}

fn density_any(alpha: f64, gamma: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if alpha == 1.0 {
        return Ok(density_alpha_one(gamma, x));
    }
    eval_density(&StableParams::new(alpha, gamma)?, x, cfg)
}

/// Unit steps on the log line over which a convergent integrand must decay.
const DIVERGENCE_WINDOW: usize = 30;

/// `int_0^inf f(y) dy` through `y = e^u`, on a window of the log line
/// that grows until the integrand is negligible at both ends.
pub(crate) fn integrate_log_line<T: QuadValue>(
    f: impl Fn(f64) -> T,
    cfg: &QuadratureConfig,
    what: &str,
) -> Result<T> {
    let h = |u: f64| {
        let y = u.exp();
        f(y) * y
    };
    let mut peak = h(0.0).magnitude();
    let mut ends = [0.0f64; 2];
    for (side, dir) in [(0usize, -1.0f64), (1, 1.0)] {
        let mut quiet = 0;
        let mut u = 0.0;
        let mut history: Vec<f64> = vec![peak];
        while quiet < 3 {
            u += dir;
            let v = h(u);
            let tail = if dir < 0.0 { Tail::Zero } else { Tail::Infinity };
            if !v.is_finite_value() {
                return Err(Error::Evaluation { x: u.exp() });
            }
            history.push(v.magnitude());
            let n = history.len();
            if n > DIVERGENCE_WINDOW + 10 && v.magnitude() > 0.0 && v.magnitude() >= history[n - 1 - DIVERGENCE_WINDOW] {
                return Err(Error::Divergence { tail });
            }
            peak = peak.max(v.magnitude());
            if v.magnitude() <= 1e-18 * peak {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if u.abs() > 700.0 {
                return Err(Error::Divergence { tail });
            }
        }
        ends[side] = u;
    }
    let pts: Vec<f64> = (0..=((ends[1] - ends[0]).round() as usize))
        .map(|k| ends[0] + k as f64)
        .collect();
    let q = integrate_partition(h, &pts, cfg, what)?;
    if !q.value.is_finite_value() {
        return Err(Error::Evaluation { x: f64::NAN });
    }
    Ok(q.value)
}

/// `int_0^inf G_alpha(x) dx`, which should be 1.
pub fn g_total_mass(p: &StableParams, cfg: &QuadratureConfig) -> Result<f64> {
    p.require_one_sided("g_total_mass")?;
    // x = y^k with k = 1/(1-alpha) turns the x^(-alpha) pole into a constant.
    let k = 1.0 / (1.0 - p.alpha());
    integrate_log_line(
        |y| {
            let x = y.powf(k);
            if x < f64::MIN_POSITIVE || p.delta() * x > -UNDERFLOW_LOG {
                return 0.0;
            }
            match eval_g_scaled(p, x, cfg) {
                Ok(q) => k * x / y * q.value * (-p.delta() * x).exp(),
                Err(_) => f64::NAN,
            }
        },
        cfg,
        "mass of G",
    )
}

/// Residual of the scaling identity
/// `int g_{alpha,gamma}(x y) g_{delta'}(y) y dy = x^(delta'-1) g_{alpha/delta',gamma}(x^delta')`.
pub fn mixture_identity_residual(
    alpha: f64,
    gamma: f64,
    delta_prime: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(alpha <= delta_prime && delta_prime < 1.0 && alpha > 0.0) {
        return Err(Error::Domain(format!(
            "need 0 < alpha <= delta' < 1, got alpha = {alpha}, delta' = {delta_prime}"
        )));
    }
    check_positive(x, "x")?;
    let inner = StableParams::new(alpha, gamma)?;
    let mixing = StableParams::one_sided(delta_prime)?;
    let lhs = integrate_log_line(
        |y| {
            let a = eval_density(&inner, x * y, cfg).unwrap_or(f64::NAN);
            let b = eval_density(&mixing, y, cfg).unwrap_or(f64::NAN);
            a * b * y
        },
        &cfg.tightened(10.0),
        "scaling identity",
    )?;
    let rhs = x.powf(delta_prime - 1.0) * density_any(alpha / delta_prime, gamma, x.powf(delta_prime), cfg)?;
    Ok(lhs - rhs)
}

/// The stable density rebuilt as a Gaussian-scale mixture of `g_{2 alpha, 2 gamma}`.
pub fn half_stable_mixture(alpha: f64, gamma: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::Domain(format!("alpha = {alpha} must lie in (0, 1/2]")));
    }
    check_positive(x, "x")?;
    if alpha == 0.5 {
        return eval_density(&StableParams::new(alpha, gamma)?, x, cfg);
    }
    if (2.0 * gamma).abs() > 1.0 {
        return Err(Error::Domain(format!(
            "the mixing law needs |2 gamma| <= 1, got gamma = {gamma}"
        )));
    }
    let mixing = StableParams::new(2.0 * alpha, 2.0 * gamma)?;
    let norm = 2.0 * alpha / (2.0 * PI.sqrt() * x.powf(alpha + 1.0));
    let v = integrate_log_line(
        |y| {
            let g = eval_density(&mixing, y, cfg).unwrap_or(f64::NAN);
            g * y.powf(alpha) * (-(y / x).powf(2.0 * alpha) / 4.0).exp()
        },
        &cfg.tightened(10.0),
        "half-stable mixture",
    )?;
    Ok(norm * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    const ERF_HALF: f64 = 0.520_499_877_813_046_5;

    fn levy(x: f64) -> f64 {
        x.powf(-1.5) * (-0.25 / x).exp() / (2.0 * PI.sqrt())
    }

    #[test]
    fn series_and_ray_agree() {
        let w = Complex64::new(0.3, -0.35);
        let a = f_series(0.4, w).unwrap().value;
        let b = entire_f_by(0.4, w, Substitution::Plain, &cfg()).unwrap().value;
        let c = entire_f_by(0.4, w, Substitution::Power, &cfg()).unwrap().value;
        assert!((a - b).norm() < 1e-12, "{a} {b}");
        assert!((a - c).norm() < 1e-12, "{a} {c}");
    }

    #[test]
    fn half_density_closed_form() {
        let p = StableParams::one_sided(0.5).unwrap();
        for &x in &[0.05, 0.3, 1.0, 4.0, 50.0] {
            let v = eval_density(&p, x, &cfg()).unwrap();
            assert!((v / levy(x) - 1.0).abs() < 1e-10, "x={x}");
            let o = density_oscillatory(&p, x, Substitution::Plain, &cfg()).unwrap().value;
            assert!((o / levy(x) - 1.0).abs() < 1e-8, "x={x} {o}");
        }
    }

    #[test]
    fn angular_form_at_half() {
        let p = StableParams::one_sided(0.5).unwrap();
        for &x in &[0.01, 1.0, 30.0, 400.0] {
            let g = eval_g_angular(&p, x, &cfg()).unwrap();
            let want = (-x / 4.0).exp() / (2.0 * (PI * x).sqrt());
            assert!((g / want - 1.0).abs() < 1e-11, "x={x}");
        }
    }

    #[test]
    fn levy_tail() {
        let p = StableParams::one_sided(0.5).unwrap();
        let t = eval_tail(&p, 1.0, &cfg()).unwrap();
        assert!((t - ERF_HALF).abs() < 1e-9, "{t}");
        let ta = tail_angular(&p, 1.0, &cfg()).unwrap();
        assert!((ta - ERF_HALF).abs() < 1e-12, "{ta}");
    }

    #[test]
    fn tail_routes_agree_across_scales() {
        for &a in &[0.3, 0.5, 0.7] {
            let p = StableParams::one_sided(a).unwrap();
            for &x in &[0.01, 0.1, 1.0, 10.0, 100.0] {
                let o = tail_oscillatory(&p, x, &cfg()).unwrap();
                let t = tail_angular(&p, x, &cfg()).unwrap();
                assert!((o - t).abs() < 1e-9 * t.max(1e-3), "alpha={a} x={x}: {o} vs {t}");
            }
        }
    }

    #[test]
    fn signed_tail_differentiates_to_density() {
        for &(a, g) in &[(0.3, 0.1), (0.7, 0.2)] {
            let p = StableParams::new(a, g).unwrap();
            for &x in &[0.1, 1.0, 10.0] {
                let h = 1e-3 * x;
                let d = (eval_tail(&p, x - h, &cfg()).unwrap() - eval_tail(&p, x + h, &cfg()).unwrap()) / (2.0 * h);
                let g = eval_density(&p, x, &cfg()).unwrap();
                assert!((d - g).abs() < 1e-5 * g.abs(), "alpha={a} x={x}: {d} vs {g}");
            }
        }
    }

    #[test]
    fn large_x_uses_contour_check() {
        let cfg = QuadratureConfig::default();
        for &a in &[0.25, 0.8] {
            let p = StableParams::one_sided(a).unwrap();
            let e = eval_g_real_detailed(&p, 774.0, &cfg).unwrap();
            assert_eq!(e.regime, Regime::Contour);
            assert!((e.value - e.check).abs() <= 1e-10 * e.value);
        }
    }

    #[test]
    fn cut_is_rejected() {
        let p = StableParams::one_sided(0.4).unwrap();
        assert!(eval_g_complex(&p, Complex64::new(-1.0, 0.0), &cfg()).unwrap_err().is_domain());
        assert!(eval_g_complex(&p, Complex64::new(0.0, 0.0), &cfg()).is_err());
    }

    #[test]
    fn alpha_one_density_mass() {
        // total mass of g_{1,gamma} is gamma
        let q = crate::quadrature::integrate(|x| density_alpha_one(0.3, x), 0.0, 1e6, &cfg(), "g1").unwrap();
        assert!((q.value - 0.3).abs() < 1e-5, "{}", q.value);
    }
}
