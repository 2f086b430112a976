use std::fmt;

/// Which end of a half-line integral misbehaved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Zero,
    Infinity,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Zero => write!(f, "0+"),
            Tail::Infinity => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge for {what}: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    Quadrature {
        what: String,
        estimate: f64,
        tolerance: f64,
    },

    #[error("cross-validation failed for {what}: {first:.12e} vs {second:.12e} (allowed {allowed:.3e})")]
    CrossValidation {
        what: String,
        first: f64,
        second: f64,
        allowed: f64,
    },

    #[error("theta grid refinement failed on [{lo:.6e}, {hi:.6e}]")]
    Refinement { lo: f64, hi: f64 },

    #[error("asymptotic constant {name} failed its cross-check: formula {formula:.10e}, numeric {numeric:.10e}")]
    ConstantResolution {
        name: &'static str,
        formula: f64,
        numeric: f64,
    },

    #[error("representation error: {0}")]
    Representation(String),

    #[error("continuation error: {0}")]
    Continuation(String),

    #[error("envelope violated at x = {x:.6e} (slack {slack:.3e})")]
    EnvelopeViolation { x: f64, slack: f64 },

    #[error("envelope acceptance rate {rate:.4} is below 1%")]
    EnvelopeQuality { rate: f64 },

    #[error("integral diverges at {tail}")]
    Divergence { tail: Tail },

    #[error("non-finite evaluation at x = {x:.6e}")]
    Evaluation { x: f64 },

    #[error("sign-change scan exhausted on [{lo:.3e}, {hi:.3e}] without a witness")]
    ScanExhausted { lo: f64, hi: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by the caller's arguments rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Precondition(_))
    }
}
