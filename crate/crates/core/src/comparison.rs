//! Comparison engine for the scalar differential inequality
//!
//! ```text
//! g′(t) ≤ −a·g(t) + α(t, g) + β(t),   g ≥ 0,
//! ```
//!
//! with `α(t, g) = c_α g^{b_α}`, `β(t) = c_β e^{−r_β t}` and weight
//! `μ(t) = R_μ e^{p_μ t}`. If
//!
//! ```text
//! α(t, 1/μ) + β(t) ≤ (1/μ)(a − μ′/μ)   for all t ≥ 0,   and   g(0)μ(0) ≤ 1,
//! ```
//!
//! then `0 ≤ g(t) ≤ 1/μ(t)` for all `t ≥ 0`. Here `w = 1/μ` satisfies
//! `w′ ≥ −aw + α(t, w) + β(t)`, so it lies above the solution of the
//! equality ODE started from the same value.

use alloc::vec::Vec;

// Float supplies libm-backed f64 math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::certify::Certificate;
use crate::error::{require, Error};
use crate::problem::Problem;
use crate::solver::{rk4, BoundReport, Grid, Trajectory};

/// `α(t, g) = coeff·g^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    /// `c_α ≥ 0`.
    pub coeff: f64,
    /// `b_α ≥ 1`.
    pub exponent: f64,
}

impl PowerTerm {
    /// `α(g)`; negative `g` is clamped to zero.
    pub fn eval(&self, g: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        self.coeff * g.max(0.0).powf(self.exponent)
    }
}

/// `β(t) = coeff·e^{−rate·t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    /// `c_β ≥ 0`.
    pub coeff: f64,
    /// `r_β > 0`.
    pub rate: f64,
}

impl ExpTerm {
    /// `β(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeff * (-self.rate * t).exp()
    }
}

/// `μ(t) = scale·e^{rate·t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpWeight {
    /// `R_μ > 0`.
    pub scale: f64,
    /// `p_μ`, any sign.
    pub rate: f64,
}

impl ExpWeight {
    /// `μ(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.scale * (self.rate * t).exp()
    }

    /// `1/μ(t)`.
    pub fn reciprocal(&self, t: f64) -> f64 {
        (-self.rate * t).exp() / self.scale
    }
}

/// One instance of the differential inequality with its candidate weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalitySpec {
    rate: f64,
    alpha: PowerTerm,
    beta: ExpTerm,
    mu: ExpWeight,
    g0: f64,
}

impl InequalitySpec {
    /// Validates and builds an instance.
    pub fn new(
        rate: f64,
        alpha: PowerTerm,
        beta: ExpTerm,
        mu: ExpWeight,
        g0: f64,
    ) -> Result<Self, Error> {
        require(rate.is_finite() && rate > 0.0, "a", rate, "finite and > 0")?;
        require(alpha.coeff >= 0.0, "c_alpha", alpha.coeff, ">= 0")?;
        require(alpha.exponent >= 1.0, "b_alpha", alpha.exponent, ">= 1")?;
        require(beta.coeff >= 0.0, "c_beta", beta.coeff, ">= 0")?;
        require(beta.rate > 0.0, "r_beta", beta.rate, "> 0")?;
        require(mu.scale > 0.0, "R_mu", mu.scale, "> 0")?;
        require(mu.rate.is_finite(), "p_mu", mu.rate, "finite")?;
        require(g0 >= 0.0, "g0", g0, ">= 0")?;
        Ok(Self {
            rate,
            alpha,
            beta,
            mu,
            g0,
        })
    }

    /// `a`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `α`.
    pub fn alpha(&self) -> PowerTerm {
        self.alpha
    }

    /// `β`.
    pub fn beta(&self) -> ExpTerm {
        self.beta
    }

    /// `μ`.
    pub fn mu(&self) -> ExpWeight {
        self.mu
    }

    /// `g(0)`.
    pub fn g0(&self) -> f64 {
        self.g0
    }

    /// Same instance with a different `g(0)`.
    pub fn with_g0(self, g0: f64) -> Result<Self, Error> {
        Self::new(self.rate, self.alpha, self.beta, self.mu, g0)
    }

    /// Right-hand side `−aw + α(t, w) + β(t)` of the majorant ODE.
    pub fn majorant_rhs(&self, t: f64, w: f64) -> f64 {
        -self.rate * w + self.alpha.eval(w) + self.beta.eval(t)
    }
}

/// Which test decided [`MuConditionReport::holds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceTest {
    /// Both weighted left-side terms are non-increasing in `t`, so the
    /// `t = 0` inequality covers all of `[0, ∞)`.
    Analytic,
    /// Only the grid nodes were checked.
    GridOnly,
}

/// Result of [`check_mu_condition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuConditionReport {
    /// Verdict.
    pub holds: bool,
    /// Which test produced the verdict.
    pub test: DominanceTest,
    /// Outcome of the grid scan.
    pub grid_holds: bool,
    /// `min_k (rhs − lhs)` over grid nodes.
    pub worst_margin: f64,
    /// Node achieving `worst_margin`.
    pub worst_node: usize,
}

/// Checks `α(t, 1/μ) + β(t) ≤ (1/μ)(a − p_μ)` on `grid`, and, where the
/// family structure allows, for every `t ≥ 0` via the `t = 0` case.
///
/// Requires `p_μ < a`.
pub fn check_mu_condition(spec: &InequalitySpec, grid: &Grid) -> Result<MuConditionReport, Error> {
    let a = spec.rate;
    let p = spec.mu.rate;
    if !(p < a) {
        return Err(Error::InvalidParameter {
            name: "p_mu",
            value: p,
            requirement: "< a",
        });
    }

    let mut worst_margin = f64::INFINITY;
    let mut worst_node = 0;
    for (k, t) in grid.nodes().enumerate() {
        let w = spec.mu.reciprocal(t);
        let margin = w * (a - p) - (spec.alpha.eval(w) + spec.beta.eval(t));
        if margin < worst_margin {
            worst_margin = margin;
            worst_node = k;
        }
    }
    let grid_holds = worst_margin >= 0.0;

    // Multiplying through by μ(t): c_α R^{1−b} e^{−(b−1)pt} + c_β R e^{−(r−p)t} ≤ a − p.
    let alpha_monotone = spec.alpha.coeff == 0.0 || spec.alpha.exponent == 1.0 || p >= 0.0;
    let beta_monotone = spec.beta.coeff == 0.0 || spec.beta.rate >= p;
    let (holds, test) = if alpha_monotone && beta_monotone {
        let r = spec.mu.scale;
        let lhs = spec.alpha.coeff / r.powf(spec.alpha.exponent - 1.0) + spec.beta.coeff * r;
        (lhs <= a - p, DominanceTest::Analytic)
    } else {
        (grid_holds, DominanceTest::GridOnly)
    };

    Ok(MuConditionReport {
        holds,
        test,
        grid_holds,
        worst_margin,
        worst_node,
    })
}

/// `g(0)·μ(0) ≤ 1`.
pub fn check_initial_condition(spec: &InequalitySpec) -> bool {
    spec.g0 * spec.mu.scale <= 1.0
}

/// RK4 solution of `w′ = −aw + α(t, w) + β(t)`, `w(0) = w0`.
pub fn integrate_majorant(
    spec: &InequalitySpec,
    w0: f64,
    grid: Grid,
) -> Result<Trajectory<f64>, Error> {
    require(w0 >= 0.0, "w0", w0, ">= 0")?;
    let values = rk4(&grid, w0, |t, w| spec.majorant_rhs(t, w), |w| w.abs())?;
    Trajectory::new(grid, values)
}

/// Checks `g_k·μ(t_k) ≤ 1 + slack` at every node.
pub fn compare_to_envelope(
    g_values: &[f64],
    spec: &InequalitySpec,
    grid: &Grid,
    slack: f64,
) -> Result<BoundReport, Error> {
    if g_values.len() != grid.len() {
        return Err(Error::GridMismatch {
            expected: grid.len(),
            found: g_values.len(),
        });
    }
    if let Some(&g) = g_values.iter().find(|g| !(**g >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "g",
            value: g,
            requirement: ">= 0",
        });
    }
    Ok(BoundReport::from_ratios(
        g_values
            .iter()
            .zip(grid.nodes())
            .map(|(g, t)| g * spec.mu.eval(t)),
        slack,
    ))
}

/// The scalar inequality satisfied by `g = |u|` for a certified problem:
/// `α = c_h g^b`, `β = c_F e^{−a₁t}`, `μ = R e^{pt}`, `g(0) = |f(0)|`.
pub fn spec_from_problem(problem: &Problem, cert: &Certificate) -> Result<InequalitySpec, Error> {
    let env = cert.envelope().ok_or(Error::CertificateFailed)?;
    let consts = problem.envelope_constants();
    InequalitySpec::new(
        problem.kernel_rate(),
        PowerTerm {
            coeff: consts.nonlinearity,
            exponent: problem.nonlinearity().exponent(),
        },
        ExpTerm {
            coeff: consts.ode_forcing,
            rate: problem.forcing().rate(),
        },
        ExpWeight {
            scale: env.radius,
            rate: env.decay_rate,
        },
        problem.initial_value().norm(),
    )
}

/// `1/μ(t_k)` at every node.
pub fn envelope_values(spec: &InequalitySpec, grid: &Grid) -> Vec<f64> {
    grid.nodes().map(|t| spec.mu.reciprocal(t)).collect()
}
