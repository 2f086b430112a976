//! Saddle curves of `t - t^alpha` and the contour representation of `G_alpha`.
//!
//! `v+` solves `f+(v) = r e^{i pi theta}` starting at the saddle `t0`, with
//! `t^alpha` continued through the upper half-plane; `v-` is its mirror.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{QuadratureConfig, StableParams};
use crate::quadrature::{gauss_legendre, Quad};
use crate::stable_core::{cis, cpow, eval_g_complex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFunction {
    pub alpha: f64,
    pub delta: f64,
    pub t0: f64,
    pub branch: Branch,
}

impl PhaseFunction {
    pub fn new(p: &StableParams, branch: Branch) -> Self {
        Self {
            alpha: p.alpha(),
            delta: p.delta(),
            t0: p.t0(),
            branch,
        }
    }

    /// `v^alpha` continued through the upper (plus) or lower (minus) half-plane.
    pub fn power(&self, v: Complex64) -> Complex64 {
        let base = cpow(v, self.alpha);
        match self.branch {
            Branch::Plus if v.im < 0.0 => base * cis(2.0 * PI * self.alpha),
            Branch::Minus if v.im > 0.0 => base * cis(-2.0 * PI * self.alpha),
            _ => base,
        }
    }

    pub fn eval(&self, v: Complex64) -> Complex64 {
        v - self.power(v) + self.delta
    }

    pub fn derivative(&self, v: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.power(v) * self.alpha / v
    }

    /// `f0(t) = t - t^alpha + delta` on the positive axis.
    pub fn f0(&self, t: f64) -> f64 {
        t - t.powf(self.alpha) + self.delta
    }

    /// Curvature of `f0` at the saddle.
    fn kappa(&self) -> f64 {
        (1.0 - self.alpha) / self.t0
    }

    /// Solution of `f(v) = r e^{i pi theta}` near the saddle, from the quadratic model.
    fn seed(&self, theta: f64, r: f64) -> Complex64 {
        let step = cis(0.5 * PI * theta) * (2.0 * r / self.kappa()).sqrt();
        let a = self.t0 + step;
        let b = self.t0 - step;
        match self.branch {
            Branch::Plus => {
                if a.im >= b.im {
                    a
                } else {
                    b
                }
            }
            Branch::Minus => {
                if a.im <= b.im {
                    a
                } else {
                    b
                }
            }
        }
    }

    /// True once a continuous argument has crossed the cut `[0, inf)` of the branch.
    fn off_sheet(&self, arg: f64) -> bool {
        let slack = 1e-9;
        match self.branch {
            Branch::Plus => !(-slack..=2.0 * PI + slack).contains(&arg),
            Branch::Minus => !(-2.0 * PI - slack..=slack).contains(&arg),
        }
    }
}

/// Checks `(1/2 - alpha)^+ < |theta| <= 1`.
pub fn check_theta(alpha: f64, theta: f64) -> Result<()> {
    let lower = (0.5 - alpha).max(0.0);
    if theta.abs() > lower && theta.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "theta = {theta} must satisfy {lower} < |theta| <= 1 for alpha = {alpha}"
        )))
    }
}

/// Follows one saddle curve along increasing `r`.
struct Tracker {
    phase: PhaseFunction,
    dir: Complex64,
    theta: f64,
    r: f64,
    v: Complex64,
    /// Continuous argument of `v`, so `v^alpha` follows the curve.
    arg: f64,
}

const SEED_R: f64 = 1e-8;

impl Tracker {
    fn new(phase: PhaseFunction, theta: f64) -> Self {
        Self {
            phase,
            dir: cis(PI * theta),
            theta,
            r: 0.0,
            v: Complex64::new(phase.t0, 0.0),
            arg: 0.0,
        }
    }

    /// Argument of `v` on the sheet nearest to `reference`.
    fn lift(v: Complex64, reference: f64) -> f64 {
        let a = v.arg();
        a + 2.0 * PI * ((reference - a) / (2.0 * PI)).round()
    }

    fn power(&self, v: Complex64, arg: f64) -> Complex64 {
        Complex64::from_polar(v.norm().powf(self.phase.alpha), self.phase.alpha * arg)
    }

    fn newton(&self, mut v: Complex64, r: f64, iters: usize) -> Option<(Complex64, f64)> {
        let target = self.dir * r;
        let tol = 1e-13 * (1.0 + r);
        let mut arg = Self::lift(v, self.arg);
        for _ in 0..iters {
            let pw = self.power(v, arg);
            let res = v - pw + self.phase.delta - target;
            if res.norm() <= tol {
                return Some((v, arg));
            }
            let d = Complex64::new(1.0, 0.0) - pw * self.phase.alpha / v;
            if d.norm() == 0.0 {
                return None;
            }
            v -= res / d;
            if !(v.re.is_finite() && v.im.is_finite()) || v.norm() == 0.0 {
                return None;
            }
            arg = Self::lift(v, arg);
        }
        let res = v - self.power(v, arg) + self.phase.delta - target;
        (res.norm() <= tol).then_some((v, arg))
    }

    fn slope(&self, v: Complex64, arg: f64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - self.power(v, arg) * self.phase.alpha / v;
        self.dir / d
    }

    fn advance_to(&mut self, r_to: f64) -> Result<Complex64> {
        if r_to <= self.r {
            return Ok(self.v);
        }
        if self.r == 0.0 {
            let r0 = r_to.min(SEED_R);
            let (v, arg) = self
                .newton(self.phase.seed(self.theta, r0), r0, 50)
                .ok_or_else(|| Error::Continuation("Newton failed at the saddle".into()))?;
            self.r = r0;
            self.v = v;
            self.arg = arg;
        }
        let mut h = r_to - self.r;
        let mut guard = 0usize;
        while self.r < r_to {
            guard += 1;
            if guard > 100_000 || h < 1e-15 * (1.0 + self.r) {
                return Err(Error::Continuation(format!(
                    "step size collapsed near r = {:.6e}",
                    self.r
                )));
            }
            h = h.min(r_to - self.r);
            let k1 = self.slope(self.v, self.arg);
            let mid = self.v + k1 * (0.5 * h);
            let k2 = self.slope(mid, Self::lift(mid, self.arg));
            let guess = self.v + k2 * h;
            let step = (guess - self.v).norm();
            let accepted = self
                .newton(guess, self.r + h, 5)
                .filter(|(v, arg)| {
                    (*v - guess).norm() <= 0.1 * step.max(1e-300)
                        && (arg - self.arg).abs() < 0.5
                });
            match accepted {
                Some((v, arg)) => {
                    self.r += h;
                    self.v = v;
                    self.arg = arg;
                    h *= 2.0;
                }
                None => h *= 0.5,
            }
        }
        if self.phase.off_sheet(self.arg) {
            return Err(Error::Continuation(format!(
                "curve reached the cut [0, inf) at r = {:.6e} (arg {:.4})",
                self.r, self.arg
            )));
        }
        Ok(self.v)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SaddleCurve {
    pub alpha: f64,
    pub theta: f64,
    pub r_samples: Vec<f64>,
    pub v_plus: Vec<Complex64>,
    pub v_minus: Vec<Complex64>,
}

impl SaddleCurve {
    /// Largest `|f(v) - r e^{i pi theta}|` over both curves.
    pub fn max_residual(&self) -> f64 {
        let p = StableParams::one_sided(self.alpha).expect("curve built from valid params");
        let plus = PhaseFunction::new(&p, Branch::Plus);
        let minus = PhaseFunction::new(&p, Branch::Minus);
        let dir = cis(PI * self.theta);
        self.r_samples
            .iter()
            .zip(self.v_plus.iter().zip(&self.v_minus))
            .map(|(&r, (&a, &b))| {
                let t = dir * r;
                (plus.eval(a) - t).norm().max((minus.eval(b) - t).norm())
            })
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,re_vplus,im_vplus,re_vminus,im_vminus\n");
        for ((r, a), b) in self.r_samples.iter().zip(&self.v_plus).zip(&self.v_minus) {
            out.push_str(&format!("{r:e},{:e},{:e},{:e},{:e}\n", a.re, a.im, b.re, b.im));
        }
        out
    }
}

/// Traces `v+` and `v-` on `r_k = r_max (k/n)^2`, `k = 0..=n`.
pub fn trace_curves(p: &StableParams, theta: f64, r_max: f64, n_steps: usize) -> Result<SaddleCurve> {
    check_theta(p.alpha(), theta)?;
    if !(r_max > 0.0 && r_max.is_finite()) || n_steps == 0 {
        return Err(Error::Domain("need r_max > 0 and n_steps >= 1".into()));
    }
    let r_samples: Vec<f64> = (0..=n_steps)
        .map(|k| r_max * (k as f64 / n_steps as f64).powi(2))
        .collect();
    let mut plus = Tracker::new(PhaseFunction::new(p, Branch::Plus), theta);
    let mut minus = Tracker::new(PhaseFunction::new(p, Branch::Minus), theta);
    let mut v_plus = Vec::with_capacity(r_samples.len());
    let mut v_minus = Vec::with_capacity(r_samples.len());
    for &r in &r_samples {
        v_plus.push(plus.advance_to(r)?);
        v_minus.push(minus.advance_to(r)?);
    }
    Ok(SaddleCurve {
        alpha: p.alpha(),
        theta,
        r_samples,
        v_plus,
        v_minus,
    })
}

/// Smallest `A` with `|v(r)| <= A + 2 r` along both curves.
pub fn curve_growth_check(curve: &SaddleCurve) -> f64 {
    curve
        .r_samples
        .iter()
        .zip(curve.v_plus.iter().zip(&curve.v_minus))
        .map(|(&r, (a, b))| a.norm().max(b.norm()) - 2.0 * r)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn contour_sum(p: &StableParams, z: Complex64, theta: f64, panels: usize, s_max: f64) -> Result<Complex64> {
    let omega = z * cis(PI * theta);
    let (x, w) = gauss_legendre(12);
    let mut plus = Tracker::new(PhaseFunction::new(p, Branch::Plus), theta);
    let mut minus = Tracker::new(PhaseFunction::new(p, Branch::Minus), theta);
    let h = s_max / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let c = (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            let s = c + 0.5 * h * xi;
            let t = s * s;
            let vp = plus.advance_to(t)?;
            let vm = minus.advance_to(t)?;
            sum += (omega * t).exp() * (vm - vp) * (2.0 * s * wi * 0.5 * h);
        }
    }
    Ok(sum)
}

/// `G_alpha(z)` from the saddle contour at angle `theta`, without cross-checking.
///
/// Needs `Re(z e^{i pi theta}) < 0`.
pub fn contour_integral(p: &StableParams, z: Complex64, theta: f64, cfg: &QuadratureConfig) -> Result<Quad<Complex64>> {
    check_theta(p.alpha(), theta)?;
    let omega = z * cis(PI * theta);
    if !(omega.re < 0.0) {
        return Err(Error::Domain(format!(
            "Re(z e^(i pi theta)) = {:.3e} must be negative",
            omega.re
        )));
    }
    let decay = -omega.re;
    let s_max = (60.0 / decay).sqrt();
    let turns = omega.im.abs() * 60.0 / decay / (2.0 * PI);
    let pref = (Complex64::new(0.0, 2.0 * PI * p.beta())).inv() * (-p.delta() * z).exp() * omega;
    let mut panels = 16 + (2.0 * turns).ceil() as usize;
    let mut prev = contour_sum(p, z, theta, panels, s_max)?;
    let mut evals = panels * 12;
    loop {
        panels *= 2;
        let next = contour_sum(p, z, theta, panels, s_max)?;
        evals += panels * 12;
        let err = (next - prev).norm();
        if err <= cfg.rel_tol.max(1e-14) * next.norm() || panels >= 4096 {
            if err > 1e-6 * next.norm() {
                return Err(Error::Quadrature {
                    what: "saddle contour".into(),
                    estimate: err / next.norm(),
                    tolerance: cfg.rel_tol,
                });
            }
            return Ok(Quad {
                value: pref * next,
                error: (pref * err).norm(),
                evals,
            });
        }
        prev = next;
    }
}

/// Contour value of `G_alpha(z)`, cross-checked against the direct continuation.
pub fn contour_eval_g(p: &StableParams, z: Complex64, theta: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    p.require_one_sided("the contour representation")?;
    let q = contour_integral(p, z, theta, cfg)?;
    let direct = eval_g_complex(p, z, cfg)?;
    let allowed = 10.0 * (q.error + 1e-8 * direct.norm());
    if (q.value - direct).norm() > allowed {
        return Err(Error::CrossValidation {
            what: format!("contour vs direct G at z = {z}"),
            first: q.value.norm(),
            second: direct.norm(),
            allowed,
        });
    }
    Ok(q.value)
}

/// Least `A + B` such that `|G(z) e^{delta z}| <= A + B/|z|` over the samples.
pub fn rough_bound_scan(p: &StableParams, zs: &[Complex64], cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    if zs.is_empty() {
        return Err(Error::Domain("empty sample set".into()));
    }
    let pts = zs
        .iter()
        .map(|&z| {
            let g = eval_g_complex(p, z, cfg)?;
            Ok(((1.0 / z.norm()), (g * (p.delta() * z).exp()).norm()))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    Ok(fit_bound(&pts))
}

/// Vertex search for `min A + B` subject to `A + B u_i >= m_i`, `A, B >= 0`.
pub(crate) fn fit_bound(pts: &[(f64, f64)]) -> (f64, f64) {
    let feasible = |a: f64, b: f64| {
        a >= 0.0 && b >= 0.0 && pts.iter().all(|&(u, m)| a + b * u >= m * (1.0 - 1e-12))
    };
    let mut cands = vec![
        (pts.iter().map(|p| p.1).fold(0.0, f64::max), 0.0),
        (0.0, pts.iter().map(|p| p.1 / p.0).fold(0.0, f64::max)),
    ];
    for (i, &(u1, m1)) in pts.iter().enumerate() {
        for &(u2, m2) in &pts[i + 1..] {
            if (u1 - u2).abs() < 1e-14 * u1.max(u2) {
                continue;
            }
            let b = (m1 - m2) / (u1 - u2);
            let a = m1 - b * u1;
            cands.push((a, b));
        }
    }
    cands
        .into_iter()
        .filter(|&(a, b)| feasible(a, b))
        .min_by(|x, y| (x.0 + x.1).total_cmp(&(y.0 + y.1)))
        .expect("a single-constraint solution is always feasible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_symmetry_and_saddle() {
        let p = StableParams::one_sided(0.3).unwrap();
        let plus = PhaseFunction::new(&p, Branch::Plus);
        let minus = PhaseFunction::new(&p, Branch::Minus);
        assert!(plus.f0(p.t0()).abs() < 1e-12);
        for &v in &[Complex64::new(0.4, 1.3), Complex64::new(-2.0, 0.5), Complex64::new(-1.0, -0.2)] {
            assert!((plus.eval(v.conj()) - minus.eval(v).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn half_curves_are_explicit() {
        let p = StableParams::one_sided(0.5).unwrap();
        let c = trace_curves(&p, 1.0, 50.0, 500).unwrap();
        assert!(c.max_residual() < 1e-10);
        for (r, v) in c.r_samples.iter().zip(&c.v_plus) {
            let want = (Complex64::new(0.5, r.sqrt())).powi(2);
            assert!((v - want).norm() < 1e-9 * (1.0 + r), "r={r}");
        }
    }

    #[test]
    fn forbidden_band() {
        let p = StableParams::one_sided(0.2).unwrap();
        assert!(trace_curves(&p, 0.3, 1.0, 10).unwrap_err().is_domain());
        let r = trace_curves(&p, 0.31, 1.0, 10);
        assert!(r.is_ok(), "{r:?}");
    }

    #[test]
    fn lp_vertex() {
        // m = 1 at u = 0 and m = 1 at u = 1: best is A = 1, B = 0
        let (a, b) = fit_bound(&[(0.0, 1.0), (1.0, 1.0), (0.5, 0.2)]);
        assert!((a - 1.0).abs() < 1e-12 && b.abs() < 1e-12);
    }
}
