use core::fmt;

/// Errors produced by construction, certification and the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range.
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// Offending value.
        value: f64,
        /// Human readable requirement, e.g. `"> 0"`.
        requirement: &'static str,
    },
    /// A certificate was required to pass but did not.
    CertificateFailed,
    /// The decay rate does not lie strictly below the forcing rate.
    DecayRateTooLarge {
        /// Requested decay rate.
        p: f64,
        /// Forcing decay rate.
        a1: f64,
    },
    /// Sup-norm of an iterate or solution exceeded the divergence guard.
    Diverged {
        /// Iteration (Picard) or step index (RK4) at which the guard tripped.
        at: usize,
        /// Sup-norm observed.
        sup_norm: f64,
    },
    /// Picard iteration hit `max_iter` without reaching the tolerance.
    NotConverged {
        /// Iterations performed.
        iterations: usize,
        /// Last successive sup-norm difference.
        final_delta: f64,
    },
    /// Two arrays or trajectories that must share a grid do not.
    GridMismatch {
        /// Expected node count.
        expected: usize,
        /// Node count found.
        found: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                requirement,
            } => write!(
                f,
                "invalid parameter {name} = {value}: must be {requirement}"
            ),
            Error::CertificateFailed => f.write_str("certificate did not pass"),
            Error::DecayRateTooLarge { p, a1 } => {
                write!(f, "decay rate p = {p} must be strictly below a1 = {a1}")
            }
            Error::Diverged { at, sup_norm } => {
                write!(f, "divergence guard tripped at {at}: sup-norm {sup_norm:e}")
            }
            Error::NotConverged {
                iterations,
                final_delta,
            } => write!(
                f,
                "no convergence after {iterations} iterations (last delta {final_delta:e})"
            ),
            Error::GridMismatch { expected, found } => {
                write!(f, "grid mismatch: expected {expected} nodes, found {found}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn require(
    ok: bool,
    name: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<(), Error> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement,
        })
    }
}
