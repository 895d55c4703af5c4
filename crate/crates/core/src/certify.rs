//! Sufficient conditions for global existence and exponential decay.
//!
//! With `R = (b−1)^{1/b}` and `p < min(a/4, a₁)`, a problem whose envelope
//! constants pass every check in the ledger has a global solution with
//! `|u(t)| ≤ e^{−pt}/R`, and the integral operator is a contraction on the
//! ball `‖u‖ ≤ 1/R` with factor `q = c_h/(R^{b−1}a)`.
//!
//! Each inequality is checked with the tight per-role constant (`c_h` for the
//! nonlinearity, `c_f` for the forcing, `c_F` for the ODE source). The single
//! shared-constant form is reported separately in [`LiteralChecks`] and does
//! not influence the verdict.

use alloc::vec::Vec;
use core::fmt;

// Float supplies libm-backed f64 math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{require, Error};
use crate::problem::{NonlinearityFamily, Problem};

/// Default safety margin keeping `p` strictly inside its open interval.
pub const DEFAULT_MARGIN: f64 = 0.02;

/// Which inequality a [`ConditionCheck`] records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionName {
    /// `b/(b−1)^{(b−1)/b} ≤ 3a/(4c_h)`.
    GrowthCondition,
    /// `c_h/R^{b−1} + c_F·R ≤ a − p`, the `t = 0` case which dominates all `t ≥ 0`.
    DirectCondition,
    /// `|f(0)|·R ≤ 1`.
    InitialCondition,
    /// `c_f + c_h/(aR^b) ≤ 1/R`: the operator maps the ball into itself.
    SelfMap,
    /// `q = c_h/(R^{b−1}a) < 1`.
    Contraction,
    /// `b^b ≤ 2^b(b−1)^{b−1}`, checked in log form.
    ExponentCondition,
}

impl ConditionName {
    /// Stable identifier used in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionName::GrowthCondition => "GrowthCondition",
            ConditionName::DirectCondition => "DirectCondition",
            ConditionName::InitialCondition => "InitialCondition",
            ConditionName::SelfMap => "SelfMap",
            ConditionName::Contraction => "Contraction",
            ConditionName::ExponentCondition => "ExponentCondition",
        }
    }
}

impl fmt::Display for ConditionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One `lhs (<|≤) rhs` comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCheck {
    /// The inequality.
    pub name: ConditionName,
    /// Left side.
    pub lhs: f64,
    /// Right side.
    pub rhs: f64,
    /// `lhs < rhs` when strict, `lhs ≤ rhs` otherwise.
    pub strict: bool,
    /// Outcome.
    pub pass: bool,
}

impl ConditionCheck {
    fn new(name: ConditionName, lhs: f64, rhs: f64, strict: bool) -> Self {
        Self {
            name,
            lhs,
            rhs,
            strict,
            pass: compare(lhs, rhs, strict),
        }
    }
}

fn compare(lhs: f64, rhs: f64, strict: bool) -> bool {
    if strict {
        lhs < rhs
    } else {
        lhs <= rhs
    }
}

/// Why a problem is outside the hypotheses altogether.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rejection {
    /// The nonlinearity is `Zero`, `Linear`, or has exponent below 2.
    ExponentBelowTwo {
        /// Family of the rejected nonlinearity.
        family: NonlinearityFamily,
        /// Its exponent.
        b: f64,
    },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::ExponentBelowTwo { .. } => f.write_str("hypothesis b ≥ 2 violated"),
        }
    }
}

/// The certified envelope `|u(t)| ≤ e^{−pt}/R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    /// `R`.
    pub radius: f64,
    /// `p`.
    pub decay_rate: f64,
}

impl Envelope {
    /// `e^{−pt}/R`.
    pub fn bound(&self, t: f64) -> f64 {
        (-self.decay_rate * t).exp() / self.radius
    }

    /// `μ(t) = R·e^{pt}`, the reciprocal of [`bound`](Self::bound).
    pub fn weight(&self, t: f64) -> f64 {
        self.radius * (self.decay_rate * t).exp()
    }
}

/// Conditions written with one shared constant `c = max(c_h, c_f)`.
///
/// Informational only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiteralChecks {
    /// The shared constant.
    pub shared_constant: f64,
    /// `c < 0.75`.
    pub constant_below_three_quarters: bool,
    /// `c·R ≤ 1/(1 + 1/(aR^b))`, as `(lhs, rhs, pass)`.
    pub self_map: (f64, f64, bool),
}

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    rejection: Option<Rejection>,
    radius: Option<f64>,
    decay_rate: f64,
    margin: f64,
    contraction_factor: Option<f64>,
    checks: Vec<ConditionCheck>,
    literal: Option<LiteralChecks>,
}

impl Certificate {
    /// True iff the hypotheses apply and every ledger entry passes.
    pub fn passes(&self) -> bool {
        self.rejection.is_none() && self.checks.iter().all(|c| c.pass)
    }

    /// Set when the problem is outside the hypotheses (no ledger is produced).
    pub fn rejection(&self) -> Option<Rejection> {
        self.rejection
    }

    /// `R = (b−1)^{1/b}`; `None` when rejected.
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// `p = (1 − margin)·min(a/4, a₁)`.
    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    /// Margin used to place `p`.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// `q = c_h/(R^{b−1}a)`; `None` when rejected.
    pub fn contraction_factor(&self) -> Option<f64> {
        self.contraction_factor
    }

    /// The ledger, in evaluation order.
    pub fn checks(&self) -> &[ConditionCheck] {
        &self.checks
    }

    /// Looks up one ledger entry.
    pub fn check(&self, name: ConditionName) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// First failing ledger entry.
    pub fn first_failure(&self) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| !c.pass)
    }

    /// Shared-constant forms of the growth and self-map conditions.
    pub fn literal(&self) -> Option<&LiteralChecks> {
        self.literal.as_ref()
    }

    /// The certified envelope, available only for passing certificates.
    pub fn envelope(&self) -> Option<Envelope> {
        if !self.passes() {
            return None;
        }
        self.radius.map(|radius| Envelope {
            radius,
            decay_rate: self.decay_rate,
        })
    }
}

/// `R = (b−1)^{1/b}`, the minimiser of `R ↦ 1/R^{b−1} + R` on `R > 0`.
pub fn radius(b: f64) -> Result<f64, Error> {
    require(b.is_finite() && b >= 2.0, "b", b, "finite and >= 2")?;
    Ok((b - 1.0).powf(1.0 / b))
}

/// `1/R^{b−1} + R`. Minimal at [`radius`], where it equals `b/(b−1)^{(b−1)/b}`.
pub fn radius_objective(b: f64, r: f64) -> f64 {
    1.0 / r.powf(b - 1.0) + r
}

/// `p = (1 − margin)·min(a/4, a₁)`.
pub fn decay_rate(a: f64, a1: f64, margin: f64) -> Result<f64, Error> {
    require(a > 0.0, "a", a, "> 0")?;
    require(a1 > 0.0, "a1", a1, "> 0")?;
    require((0.0..1.0).contains(&margin), "margin", margin, "in [0, 1)")?;
    Ok((1.0 - margin) * (0.25 * a).min(a1))
}

/// `b/(b−1)^{(b−1)/b} ≤ 3a/(4c_h)`, non-strict.
pub fn check_growth(a: f64, b: f64, c_h: f64) -> ConditionCheck {
    let lhs = b / (b - 1.0).powf((b - 1.0) / b);
    let rhs = 3.0 * a / (4.0 * c_h);
    ConditionCheck::new(ConditionName::GrowthCondition, lhs, rhs, false)
}

/// `c_h/R^{b−1} + c_F·R ≤ a − p`, non-strict.
///
/// Both left-side terms are non-increasing in `t` once multiplied through by
/// `R e^{pt}` (given `p < a₁`, `b ≥ 1`), so `t = 0` is the binding case.
pub fn check_direct(
    a: f64,
    b: f64,
    c_h: f64,
    c_ode_forcing: f64,
    r: f64,
    p: f64,
    a1: f64,
) -> Result<ConditionCheck, Error> {
    if p >= a1 {
        return Err(Error::DecayRateTooLarge { p, a1 });
    }
    let lhs = c_h / r.powf(b - 1.0) + c_ode_forcing * r;
    Ok(ConditionCheck::new(
        ConditionName::DirectCondition,
        lhs,
        a - p,
        false,
    ))
}

/// `b ln b ≤ b ln 2 + (b−1) ln(b−1)`, non-strict.
pub fn check_exponent(b: f64) -> ConditionCheck {
    let lhs = b * b.ln();
    let rhs = b * 2.0f64.ln() + (b - 1.0) * (b - 1.0).ln();
    ConditionCheck::new(ConditionName::ExponentCondition, lhs, rhs, false)
}

/// `|f(0)|·R ≤ 1`, non-strict.
pub fn check_initial(f0_abs: f64, r: f64) -> ConditionCheck {
    ConditionCheck::new(ConditionName::InitialCondition, f0_abs * r, 1.0, false)
}

/// Contraction `q < 1` (strict) and self-map `c_f + c_h/(aR^b) ≤ 1/R`
/// (non-strict). Returns `(contraction, self_map, q)`.
pub fn check_contraction(
    a: f64,
    b: f64,
    c_h: f64,
    c_f: f64,
    r: f64,
) -> (ConditionCheck, ConditionCheck, f64) {
    let q = c_h / (r.powf(b - 1.0) * a);
    let contraction = ConditionCheck::new(ConditionName::Contraction, q, 1.0, true);
    let self_map = ConditionCheck::new(
        ConditionName::SelfMap,
        c_f + c_h / (a * r.powf(b)),
        1.0 / r,
        false,
    );
    (contraction, self_map, q)
}

/// Runs the full condition chain for `problem`.
///
/// `margin` must lie in `(0, 1)`. Problems whose nonlinearity is `Zero`,
/// `Linear` or has `b < 2` yield a failing certificate with a
/// [`Rejection`], not an error.
pub fn certify(problem: &Problem, margin: f64) -> Result<Certificate, Error> {
    require(margin > 0.0 && margin < 1.0, "margin", margin, "in (0, 1)")?;
    let a = problem.kernel_rate();
    let a1 = problem.forcing().rate();
    let p = decay_rate(a, a1, margin)?;
    let h = problem.nonlinearity();
    let b = h.exponent();

    let gated = matches!(
        h.family(),
        NonlinearityFamily::Zero | NonlinearityFamily::Linear
    ) || b < 2.0;
    if gated {
        return Ok(Certificate {
            rejection: Some(Rejection::ExponentBelowTwo {
                family: h.family(),
                b,
            }),
            radius: None,
            decay_rate: p,
            margin,
            contraction_factor: None,
            checks: Vec::new(),
            literal: None,
        });
    }

    let env = problem.envelope_constants();
    let r = radius(b)?;
    let f0 = problem.initial_value().norm();

    let mut checks = Vec::with_capacity(6);
    checks.push(check_growth(a, b, env.nonlinearity));
    checks.push(check_direct(
        a,
        b,
        env.nonlinearity,
        env.ode_forcing,
        r,
        p,
        a1,
    )?);
    checks.push(check_initial(f0, r));
    checks.push(check_exponent(b));
    let (contraction, self_map, q) = check_contraction(a, b, env.nonlinearity, env.forcing, r);
    checks.push(self_map);
    checks.push(contraction);

    let c = env.nonlinearity.max(env.forcing);
    let literal_lhs = c * r;
    let literal_rhs = 1.0 / (1.0 + 1.0 / (a * r.powf(b)));
    let literal = LiteralChecks {
        shared_constant: c,
        constant_below_three_quarters: c < 0.75,
        self_map: (literal_lhs, literal_rhs, literal_lhs <= literal_rhs),
    };

    Ok(Certificate {
        rejection: None,
        radius: Some(r),
        decay_rate: p,
        margin,
        contraction_factor: Some(q),
        checks,
        literal: Some(literal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Forcing, Nonlinearity};
    use num_complex::Complex64;

    fn problem(a: f64, lambda: f64, amp: f64, a1: f64) -> Problem {
        Problem::new(
            a,
            Nonlinearity::integer_power(Complex64::new(lambda, 0.0), 2).unwrap(),
            Forcing::exp_decay(Complex64::new(amp, 0.0), a1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius(2.0).unwrap(), 1.0);
        assert!((radius(3.0).unwrap() - 1.259_921_049_894_873).abs() < 1e-12);
        assert_eq!(radius_objective(2.0, radius(2.0).unwrap()), 2.0);
        assert!(radius(1.99).is_err());
        assert!(radius(f64::NAN).is_err());
    }

    #[test]
    fn decay_rate_examples() {
        assert!((decay_rate(2.0, 1.0, 0.02).unwrap() - 0.49).abs() < 1e-15);
        assert_eq!(decay_rate(4.0, 0.5, 0.0).unwrap(), 0.5);
        assert_eq!(decay_rate(2.0, 10.0, 0.5).unwrap(), 0.25);
        assert!(decay_rate(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn growth_examples() {
        let at_boundary = check_growth(2.0, 2.0, 0.75);
        assert_eq!((at_boundary.lhs, at_boundary.rhs), (2.0, 2.0));
        assert!(at_boundary.pass);
        let over = check_growth(2.0, 2.0, 0.76);
        assert!((over.rhs - 1.973_684_210_526_316).abs() < 1e-12);
        assert!(!over.pass);
        let under = check_growth(2.0, 2.0, 0.5);
        assert_eq!(under.rhs, 3.0);
        assert!(under.pass);
    }

    #[test]
    fn direct_examples() {
        let ok = check_direct(2.0, 2.0, 0.5, 0.1, 1.0, 0.49, 1.0).unwrap();
        assert!((ok.lhs - 0.6).abs() < 1e-15 && (ok.rhs - 1.51).abs() < 1e-15 && ok.pass);
        let zero = check_direct(2.0, 2.0, 0.0, 0.0, 1.0, 1.9, 5.0).unwrap();
        assert_eq!(zero.lhs, 0.0);
        assert!(zero.pass);
        let bad = check_direct(2.0, 2.0, 1.6, 0.0, 1.0, 0.49, 1.0).unwrap();
        assert!(!bad.pass);
        assert!(matches!(
            check_direct(2.0, 2.0, 0.5, 0.1, 1.0, 1.0, 1.0),
            Err(Error::DecayRateTooLarge { .. })
        ));
    }

    #[test]
    fn exponent_examples() {
        let two = check_exponent(2.0);
        assert!(two.pass);
        assert!((two.lhs - two.rhs).abs() < 1e-15);
        let three = check_exponent(3.0);
        assert!((three.lhs.exp() - 27.0).abs() < 1e-10);
        assert!((three.rhs.exp() - 32.0).abs() < 1e-10);
        assert!(three.pass);
        // b = 1.5 passes numerically; the b ≥ 2 gate lives in `certify`.
        let below = check_exponent(1.5);
        assert!((below.lhs.exp() - 1.837_117_307_087_383_6).abs() < 1e-12);
        assert!((below.rhs.exp() - 2.0).abs() < 1e-12);
        assert!(below.pass);
    }

    #[test]
    fn initial_examples() {
        assert!(check_initial(0.1, 1.0).pass);
        assert!(check_initial(0.0, 1.7).pass);
        assert!(!check_initial(1.5, 1.0).pass);
    }

    #[test]
    fn contraction_examples() {
        let (c, s, q) = check_contraction(2.0, 2.0, 0.5, 0.3, 1.0);
        assert_eq!(q, 0.25);
        assert!(c.pass && c.strict);
        assert!((s.lhs - 0.55).abs() < 1e-15 && s.rhs == 1.0 && s.pass);
        let (c, _, q) = check_contraction(2.0, 2.0, 0.0, 0.3, 1.0);
        assert_eq!(q, 0.0);
        assert!(c.pass);
        let (c, _, _) = check_contraction(2.0, 2.0, 2.0, 0.0, 1.0);
        assert!(!c.pass, "q = 1 must fail the strict test");
    }

    #[test]
    fn certify_worked_problem() {
        let cert = certify(&problem(2.0, -0.5, 0.1, 1.0), DEFAULT_MARGIN).unwrap();
        assert!(cert.passes());
        assert_eq!(cert.radius(), Some(1.0));
        assert!((cert.decay_rate() - 0.49).abs() < 1e-15);
        assert_eq!(cert.contraction_factor(), Some(0.25));
        assert_eq!(cert.checks().len(), 6);
        let lit = cert.literal().unwrap();
        assert!((lit.shared_constant - 0.5).abs() < 1e-15);
        assert!(lit.constant_below_three_quarters);
    }

    #[test]
    fn certify_failures() {
        let cert = certify(&problem(2.0, -0.76, 0.1, 1.0), DEFAULT_MARGIN).unwrap();
        assert!(!cert.passes());
        assert_eq!(
            cert.first_failure().map(|c| c.name),
            Some(ConditionName::GrowthCondition)
        );
        assert!(cert.envelope().is_none());

        let zero = Problem::new(
            2.0,
            Nonlinearity::zero(),
            Forcing::exp_decay(Complex64::new(0.1, 0.0), 1.0).unwrap(),
        )
        .unwrap();
        let cert = certify(&zero, DEFAULT_MARGIN).unwrap();
        assert!(!cert.passes());
        let reason = cert.rejection().unwrap();
        assert_eq!(alloc::format!("{reason}"), "hypothesis b ≥ 2 violated");
        assert!(cert.checks().is_empty());

        assert!(certify(&problem(2.0, -0.5, 0.1, 1.0), 0.0).is_err());
    }

    #[test]
    fn initial_condition_can_fail_alone() {
        let cert = certify(&problem(2.0, 0.0, 1.5, 2.0), DEFAULT_MARGIN).unwrap();
        let names: Vec<_> = cert
            .checks()
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect();
        assert!(names.contains(&ConditionName::InitialCondition));
    }
}
