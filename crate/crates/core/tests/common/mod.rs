#![allow(dead_code)]

use expvolterra::certify::DEFAULT_MARGIN;
use expvolterra::{certify, Complex64, Forcing, Nonlinearity, Problem};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// a = 2, h(u) = −0.5u², f(t) = 0.1e^{−t}.
pub fn worked_problem() -> Problem {
    problem(
        2.0,
        Nonlinearity::integer_power(c(-0.5), 2).unwrap(),
        c(0.1),
        1.0,
    )
}

pub fn problem(a: f64, h: Nonlinearity, amp: Complex64, a1: f64) -> Problem {
    Problem::new(a, h, Forcing::exp_decay(amp, a1).unwrap()).unwrap()
}

/// Closed-form solution of u′ = −(a − λ)u + A(a − a₁)e^{−a₁t}, u(0) = A,
/// i.e. the linear family h(u) = λu with f(t) = Ae^{−a₁t}. Requires a − λ ≠ a₁.
pub fn linear_exact(a: f64, lambda: f64, amp: f64, a1: f64, t: f64) -> f64 {
    let k = a - lambda;
    amp * (-k * t).exp() + amp * (a - a1) * ((-a1 * t).exp() - (-k * t).exp()) / (k - a1)
}

/// Raw draw for a randomised certificate-passing problem.
#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub a: f64,
    pub b: u32,
    pub modulus_family: bool,
    pub lambda_abs: f64,
    pub lambda_phase: f64,
    pub amp_abs: f64,
    pub amp_phase: f64,
    pub a1: f64,
}

/// Builds the drawn problem, shrinking |λ| and |A| geometrically until the
/// certificate passes. Certification is monotone in both, and passes at zero.
pub fn certified_problem(d: Draw) -> (Problem, expvolterra::Certificate) {
    let mut scale = 1.0;
    for _ in 0..200 {
        let lambda = Complex64::from_polar(d.lambda_abs * scale, d.lambda_phase);
        let amp = Complex64::from_polar(d.amp_abs * scale, d.amp_phase);
        let h = if d.modulus_family {
            Nonlinearity::modulus_power(lambda, f64::from(d.b)).unwrap()
        } else {
            Nonlinearity::integer_power(lambda, d.b).unwrap()
        };
        let p = problem(d.a, h, amp, d.a1);
        let cert = certify(&p, DEFAULT_MARGIN).unwrap();
        if cert.passes() {
            return (p, cert);
        }
        scale *= 0.7;
    }
    panic!("draw {d:?} never certified");
}
