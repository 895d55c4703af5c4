//! Numerical solutions on a uniform grid and verification of the certified
//! envelope.
//!
//! Two independent routes are provided:
//!
//! - [`solve_picard`] iterates the integral operator `T`. Each sweep evaluates
//!   the convolution with [`convolve_exp`], a trapezoid rule that propagates
//!   the history exactly through `e^{−aΔ}`, so a sweep costs O(n).
//! - [`solve_ode`] integrates `u′ = −au + h(u) + F(t)` with classical RK4.

use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_complex::Complex64;
// Float supplies libm-backed f64 math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::certify::Certificate;
use crate::error::{require, Error};
use crate::problem::Problem;

/// Sup-norm beyond which an iterate or solution is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Default slack for [`verify_bound`].
pub const DEFAULT_SLACK: f64 = 1e-6;

/// Uniform grid `t_k = kT/n`, `k = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    horizon: f64,
    steps: usize,
}

impl Grid {
    /// Grid on `[0, horizon]` with `steps ≥ 1` intervals.
    pub fn new(horizon: f64, steps: usize) -> Result<Self, Error> {
        require(
            horizon.is_finite() && horizon > 0.0,
            "T",
            horizon,
            "finite and > 0",
        )?;
        require(steps >= 1, "n", steps as f64, ">= 1")?;
        Ok(Self { horizon, steps })
    }

    /// Grid on `[0, horizon]` whose spacing is as close as possible to `step`.
    pub fn with_step(horizon: f64, step: f64) -> Result<Self, Error> {
        require(
            step.is_finite() && step > 0.0,
            "step",
            step,
            "finite and > 0",
        )?;
        Self::new(horizon, (horizon / step).round().max(1.0) as usize)
    }

    /// `T`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of intervals `n`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of nodes, `n + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    /// Always false; a grid has at least two nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Δ = T/n`.
    pub fn step(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// `t_k`, with `t_n = T` exactly.
    pub fn node(&self, k: usize) -> f64 {
        if k == self.steps {
            self.horizon
        } else {
            k as f64 * self.step()
        }
    }

    /// All nodes in order.
    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(move |k| self.node(k))
    }
}

/// Values sampled at every node of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T = Complex64> {
    grid: Grid,
    values: Vec<T>,
}

impl<T> Trajectory<T> {
    /// Wraps `values`, which must have one entry per node.
    pub fn new(grid: Grid, values: Vec<T>) -> Result<Self, Error> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn sample(grid: Grid, f: impl Fn(f64) -> T) -> Self {
        Self {
            grid,
            values: grid.nodes().map(f).collect(),
        }
    }

    /// The grid.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// The sampled values.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Consumes the trajectory, returning its values.
    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

impl Trajectory<Complex64> {
    /// Pointwise modulus `g(t_k) = |u(t_k)|`.
    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|u| u.norm()).collect()
    }

    /// `max_k |u_k|`.
    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.values)
    }

    /// `max_k |u_k − v_k|`; the grids must have the same node count.
    pub fn sup_distance(&self, other: &Self) -> Result<f64, Error> {
        if self.values.len() != other.values.len() {
            return Err(Error::GridMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(sup_distance(&self.values, &other.values))
    }
}

fn sup_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|u| u.norm()).fold(0.0, f64::max)
}

fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `I_k ≈ ∫₀^{t_k} e^{−a(t_k−s)} w(s) ds` for samples `w_k = w(t_k)`.
///
/// Uses `I_0 = 0`, `I_{k+1} = e^{−aΔ}I_k + (Δ/2)(e^{−aΔ}w_k + w_{k+1})`, which
/// is the composite trapezoid rule applied to `e^{−a(t_k−s)}w(s)` with the
/// kernel factor carried exactly from step to step. Second order in `Δ`.
pub fn convolve_exp(a: f64, w: &[Complex64], step: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(w.len());
    if w.is_empty() {
        return out;
    }
    let decay = (-a * step).exp();
    let half = 0.5 * step;
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for pair in w.windows(2) {
        acc = acc * decay + (pair[0] * decay + pair[1]) * half;
        out.push(acc);
    }
    out
}

/// `(Tu)(t_k) = ∫₀^{t_k} e^{−a(t_k−s)} h(u(s)) ds + f(t_k)`, discretised with
/// [`convolve_exp`].
pub fn apply_operator(problem: &Problem, u: &Trajectory) -> Trajectory {
    let grid = *u.grid();
    let h = problem.nonlinearity();
    let w: Vec<Complex64> = u.values.iter().map(|&x| h.eval(x)).collect();
    let mut values = convolve_exp(problem.kernel_rate(), &w, grid.step());
    for (k, v) in values.iter_mut().enumerate() {
        *v += problem.forcing().eval(grid.node(k));
    }
    Trajectory { grid, values }
}

/// Stopping rules for [`solve_picard`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    /// Stop once `sup_k |u^{m+1}_k − u^m_k| ≤ tol`.
    pub tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
    /// Abort when an iterate's sup-norm exceeds this.
    pub divergence_limit: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
            divergence_limit: DIVERGENCE_LIMIT,
        }
    }
}

/// A converged Picard iterate and its convergence history.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardSolution {
    /// The last iterate.
    pub trajectory: Trajectory,
    /// Number of operator applications.
    pub iterations: usize,
    /// `sup_k |u^m_k − u^{m−1}_k|` for the last iteration.
    pub final_delta: f64,
    /// Successive sup-norm differences, one per iteration.
    pub deltas: Vec<f64>,
}

impl PicardSolution {
    /// Ratios `δ_{m+1}/δ_m` of successive differences. Pairs with a zero
    /// denominator are skipped.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.deltas
            .windows(2)
            .filter(|d| d[0] > 0.0)
            .map(|d| d[1] / d[0])
            .collect()
    }
}

/// Picard iteration `u^{m+1} = T(u^m)` from `u⁰ = f`.
pub fn solve_picard(
    problem: &Problem,
    grid: Grid,
    options: &PicardOptions,
) -> Result<PicardSolution, Error> {
    require(options.tol > 0.0, "tol", options.tol, "> 0")?;
    let mut current = Trajectory::sample(grid, |t| problem.forcing().eval(t));
    let mut deltas = Vec::new();
    for m in 1..=options.max_iter {
        let next = apply_operator(problem, &current);
        let norm = next.sup_norm();
        if !(norm <= options.divergence_limit) {
            return Err(Error::Diverged {
                at: m,
                sup_norm: norm,
            });
        }
        let delta = sup_distance(&next.values, &current.values);
        deltas.push(delta);
        current = next;
        if delta <= options.tol {
            return Ok(PicardSolution {
                trajectory: current,
                iterations: m,
                final_delta: delta,
                deltas,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: options.max_iter,
        final_delta: deltas.last().copied().unwrap_or(f64::NAN),
    })
}

/// Classical RK4 on `grid` from `y0`. Stops with [`Error::Diverged`] once
/// `norm(y)` exceeds [`DIVERGENCE_LIMIT`] or becomes non-finite.
pub(crate) fn rk4<V, F, N>(grid: &Grid, y0: V, rhs: F, norm: N) -> Result<Vec<V>, Error>
where
    V: Copy + Add<Output = V> + Mul<f64, Output = V>,
    F: Fn(f64, V) -> V,
    N: Fn(&V) -> f64,
{
    let dt = grid.step();
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push(y);
    for k in 0..grid.steps() {
        let t = grid.node(k);
        let k1 = rhs(t, y);
        let k2 = rhs(t + 0.5 * dt, y + k1 * (0.5 * dt));
        let k3 = rhs(t + 0.5 * dt, y + k2 * (0.5 * dt));
        let k4 = rhs(t + dt, y + k3 * dt);
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        let n = norm(&y);
        if !(n <= DIVERGENCE_LIMIT) {
            return Err(Error::Diverged {
                at: k + 1,
                sup_norm: n,
            });
        }
        out.push(y);
    }
    Ok(out)
}

/// RK4 on `u′ = −au + h(u) + F(t)`, `u(0) = f(0)`, with `F = f′ + af`
/// evaluated analytically at stage times.
pub fn solve_ode(problem: &Problem, grid: Grid) -> Result<Trajectory, Error> {
    let values = rk4(
        &grid,
        problem.initial_value(),
        |t, u| problem.ode_rhs(t, u),
        |u| u.norm(),
    )?;
    Ok(Trajectory { grid, values })
}

/// Pointwise comparison of a trajectory against an envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// `max_k |u_k|·μ(t_k)`, i.e. the largest ratio to the envelope.
    pub max_ratio: f64,
    /// First node where the ratio exceeds `1 + slack`.
    pub violated_at: Option<usize>,
    /// Tolerance used.
    pub slack: f64,
}

impl BoundReport {
    /// Builds a report from per-node ratios `|u_k|/envelope(t_k)`.
    pub fn from_ratios(ratios: impl IntoIterator<Item = f64>, slack: f64) -> Self {
        let mut max_ratio = 0.0f64;
        let mut violated_at = None;
        for (k, r) in ratios.into_iter().enumerate() {
            if violated_at.is_none() && !(r <= 1.0 + slack) {
                violated_at = Some(k);
            }
            max_ratio = if r.is_nan() {
                f64::NAN
            } else {
                max_ratio.max(r)
            };
        }
        Self {
            max_ratio,
            violated_at,
            slack,
        }
    }

    /// True iff no node exceeds `1 + slack`.
    pub fn holds(&self) -> bool {
        self.violated_at.is_none()
    }
}

/// Checks `|u(t_k)|·R·e^{p t_k} ≤ 1 + slack` at every node.
///
/// Fails with [`Error::CertificateFailed`] unless `cert` passes.
pub fn verify_bound(u: &Trajectory, cert: &Certificate, slack: f64) -> Result<BoundReport, Error> {
    let env = cert.envelope().ok_or(Error::CertificateFailed)?;
    require(slack >= 0.0, "slack", slack, ">= 0")?;
    let grid = u.grid();
    Ok(BoundReport::from_ratios(
        u.values
            .iter()
            .enumerate()
            .map(|(k, v)| v.norm() * env.weight(grid.node(k))),
        slack,
    ))
}
