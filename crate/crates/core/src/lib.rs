//! Solver for the L^2-norm-preserving nonlocal parabolic flow
//! du/dt = Lap u - omega u + mu[u] |u|^{2 sigma} u, with independent
//! stationary-state oracles and an end-to-end verification harness.

pub mod domain;
pub mod error;
pub mod flow;
pub mod functionals;
pub mod harness;
pub mod stationary;

pub use error::{NormFlowError, Result};
