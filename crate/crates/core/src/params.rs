//! Validated stable-law parameters and quadrature settings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Band of `alpha` on which the numerical guarantees are stated.
pub const GUARANTEED_ALPHA: (f64, f64) = (0.05, 0.95);

/// An `(alpha, gamma)` pair with the derived exponent `beta`, the saddle point
/// `t0` of `t - t^alpha` and the tail rate `delta = -(t0 - t0^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    alpha: f64,
    gamma: f64,
    beta: f64,
    delta: f64,
    t0: f64,
}

impl StableParams {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha = {alpha} must lie in the open interval (0,1)"
            )));
        }
        if !(gamma.abs() <= 1.0) {
            return Err(Error::Domain(format!("gamma = {gamma} must satisfy |gamma| <= 1")));
        }
        let beta = alpha / (1.0 - alpha);
        let t0 = alpha.powf(1.0 / (1.0 - alpha));
        let delta = (1.0 - alpha) * alpha.powf(beta);
        Ok(Self {
            alpha,
            gamma,
            beta,
            delta,
            t0,
        })
    }

    /// The one-sided law, `gamma = alpha`.
    pub fn one_sided(alpha: f64) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn is_one_sided(&self) -> bool {
        self.gamma == self.alpha
    }

    /// False when `alpha` sits outside the band where accuracy is guaranteed.
    pub fn in_guaranteed_range(&self) -> bool {
        (GUARANTEED_ALPHA.0..=GUARANTEED_ALPHA.1).contains(&self.alpha)
    }

    pub(crate) fn require_one_sided(&self, op: &str) -> Result<()> {
        if self.is_one_sided() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{op} needs gamma = alpha, got gamma = {} for alpha = {}",
                self.gamma, self.alpha
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Relative size below which a far panel of a half-line integral is dropped.
    pub truncation_tail_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            truncation_tail_tol: 1e-17,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.rel_tol) || !positive(self.abs_tol) || !positive(self.truncation_tail_tol) {
            return Err(Error::Domain("quadrature tolerances must be positive and finite".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }

    /// Same settings with a tighter relative tolerance, used for inner integrals.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: (self.rel_tol * factor).max(1e-15),
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        for &a in &[0.05, 0.2, 0.5, 0.77, 0.95] {
            let p = StableParams::one_sided(a).unwrap();
            assert!((p.delta() + (p.t0() - p.t0().powf(a))).abs() < 1e-14);
            let deriv = 1.0 - a * p.t0().powf(a - 1.0);
            assert!(deriv.abs() < 1e-12, "t0 is not stationary for alpha={a}");
            assert!((p.beta() * (1.0 - a) - a).abs() < 1e-15);
        }
        let p = StableParams::one_sided(0.5).unwrap();
        assert!((p.delta() - 0.25).abs() < 1e-15);
        assert!((p.t0() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(StableParams::new(1.0, 0.5).is_err());
        assert!(StableParams::new(0.0, 0.0).is_err());
        assert!(StableParams::new(0.5, 1.2).is_err());
        assert!(StableParams::new(f64::NAN, 0.2).is_err());
        assert!(!StableParams::one_sided(0.01).unwrap().in_guaranteed_range());
        assert!(QuadratureConfig::new(0.0, 1e-14, 10).is_err());
        assert!(QuadratureConfig::new(1e-8, 1e-14, 0).is_err());
    }
}
