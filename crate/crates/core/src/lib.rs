//! Numerical tools for the Volterra–Hammerstein equation with exponential kernel
//!
//! ```text
//! u(t) = ∫₀ᵗ e^{−a(t−s)} h(u(s)) ds + f(t),   t ≥ 0,  a > 0.
//! ```
//!
//! The crate is split along four concerns:
//!
//! - [`problem`]: closed-form nonlinearity and forcing families together with
//!   the tight growth-envelope constants they satisfy.
//! - [`certify`]: the sufficient-condition chain for global existence and
//!   exponential decay `|u(t)| ≤ e^{−pt}/R`, plus the contraction-mapping
//!   conditions on the ball `‖u‖ ≤ 1/R`.
//! - [`solver`]: two independent numerical solutions (Picard iteration with an
//!   O(n) exponential-kernel quadrature, and RK4 on the equivalent ODE
//!   `u′ = −au + h(u) + f′ + af`) and pointwise verification of the certified
//!   envelope.
//! - [`comparison`]: a differential-inequality comparison engine for
//!   `g′ ≤ −ag + α(t, g) + β(t)` with exponential weight `μ(t) = R e^{pt}`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_docs)]
// `!(x <= y)` is used deliberately so NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod certify;
pub mod comparison;
mod error;
pub mod problem;
pub mod solver;

pub use num_complex::Complex64;

pub use certify::{certify, Certificate, ConditionCheck, ConditionName, Envelope};
pub use comparison::{InequalitySpec, MuConditionReport};
pub use error::Error;
pub use problem::{EnvelopeConstants, Forcing, Nonlinearity, NonlinearityFamily, Problem};
pub use solver::{
    solve_ode, solve_picard, verify_bound, BoundReport, Grid, PicardOptions, PicardSolution,
    Trajectory,
};
