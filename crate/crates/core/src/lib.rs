//! Numerical laboratory for a finite Euler-Maclaurin continuation of the
//! Riemann zeta function and the factor function attached to it.
//!
//! The crate provides:
//!
//! * [`zeta`]: the truncated-sum evaluator `evaluate_zeta`, the factor
//!   function `f_gb`, the rational factor `q_of`, and the exactness check
//!   tying them together.
//! * [`bernoulli`]: exact even-index Bernoulli numbers backing the
//!   correction tail.
//! * [`circle`]: exactly conjugate-symmetric sampling grids on circles
//!   centred at the symmetry point of the functional equation.
//! * [`laurent`]: coefficient extraction on those circles, parity
//!   splitting, and closed-form coefficients of the rational factor.
//! * [`nullcond`]: residuals of the constraint system that vanishes on the
//!   critical line, plus a Hardy-function scanner for zero candidates.
//!
//! Everything numeric is generic over the scalar through [`Scalar`];
//! [`Real`] and [`C64`] fix the default `f64` instantiation.

// Validation guards use `!(x > y)` instead of `x <= y` so that NaN fails
// them; the partial_cmp form clippy suggests would hide that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bernoulli;
pub mod circle;
pub mod error;
pub mod gamma;
pub mod laurent;
pub mod nullcond;
pub mod scalar;
pub mod zeta;

pub use error::CoreError;
pub use scalar::{Cx, Scalar};

/// Default real scalar used by the command-line tools.
pub type Real = f64;
/// Default complex scalar.
pub type C64 = Cx<f64>;

/// Result alias used across the crate.
pub type Result<T, E = CoreError> = std::result::Result<T, E>;
