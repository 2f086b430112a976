//! Numerics for one-sided stable laws and the transformed density of
//! `S_alpha^(-beta)`: evaluation, boundary arguments, exponential-Stieltjes
//! reconstruction, envelopes and HCM classification.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod classify;
pub mod cli;
pub mod envelopes;
pub mod error;
pub mod hcm;
pub mod params;
pub mod quadrature;
pub mod saddle;
pub mod stable_core;

pub use error::{Error, Result, Tail};
pub use params::{QuadratureConfig, StableParams, GUARANTEED_ALPHA};
