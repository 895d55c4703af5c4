//! Equation instances: nonlinearity `h`, forcing `f`, kernel rate `a`.
//!
//! Only closed-form families are supported so that every growth envelope is
//! exact and every derivative analytic.

use num_complex::Complex64;
// Float supplies libm-backed f64 math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{require, Error};

/// Closed-form families for the nonlinearity `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NonlinearityFamily {
    /// `h(u) = 0`.
    Zero,
    /// `h(u) = λu`. Useful for testing the solvers; never certifiable.
    Linear,
    /// `h(u) = λu^b` with integer `b ≥ 2`.
    IntegerPower,
    /// `h(u) = λ·u·|u|^{b−1}` with real `b ≥ 2`.
    ModulusPower,
}

/// A nonlinearity `h` drawn from one of the [`NonlinearityFamily`] variants.
///
/// Every family satisfies `|h(u)| ≤ |λ|·|u|^b` and `h(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nonlinearity {
    family: NonlinearityFamily,
    lambda: Complex64,
    exponent: f64,
}

impl Nonlinearity {
    /// `h ≡ 0`. The nominal exponent is 1.
    pub fn zero() -> Self {
        Self {
            family: NonlinearityFamily::Zero,
            lambda: Complex64::new(0.0, 0.0),
            exponent: 1.0,
        }
    }

    /// `h(u) = λu`.
    pub fn linear(lambda: Complex64) -> Result<Self, Error> {
        check_coefficient(lambda)?;
        Ok(Self {
            family: NonlinearityFamily::Linear,
            lambda,
            exponent: 1.0,
        })
    }

    /// `h(u) = λu^b` for integer `b ≥ 2`.
    pub fn integer_power(lambda: Complex64, b: u32) -> Result<Self, Error> {
        check_coefficient(lambda)?;
        require(b >= 2, "b", f64::from(b), "an integer >= 2")?;
        Ok(Self {
            family: NonlinearityFamily::IntegerPower,
            lambda,
            exponent: f64::from(b),
        })
    }

    /// `h(u) = λ·u·|u|^{b−1}` for real `b ≥ 2`.
    pub fn modulus_power(lambda: Complex64, b: f64) -> Result<Self, Error> {
        check_coefficient(lambda)?;
        require(b.is_finite() && b >= 2.0, "b", b, "finite and >= 2")?;
        Ok(Self {
            family: NonlinearityFamily::ModulusPower,
            lambda,
            exponent: b,
        })
    }

    /// Builds any family from its parts. `b` is ignored for `Zero` and `Linear`.
    pub fn from_parts(
        family: NonlinearityFamily,
        lambda: Complex64,
        b: f64,
    ) -> Result<Self, Error> {
        match family {
            NonlinearityFamily::Zero => Ok(Self::zero()),
            NonlinearityFamily::Linear => Self::linear(lambda),
            NonlinearityFamily::IntegerPower => {
                require(
                    b.fract() == 0.0 && (2.0..=f64::from(u32::MAX)).contains(&b),
                    "b",
                    b,
                    "an integer >= 2",
                )?;
                Self::integer_power(lambda, b as u32)
            }
            NonlinearityFamily::ModulusPower => Self::modulus_power(lambda, b),
        }
    }

    /// The family.
    pub fn family(&self) -> NonlinearityFamily {
        self.family
    }

    /// The coefficient `λ`.
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// The exponent `b` (1 for `Zero` and `Linear`).
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Envelope constant `c_h = |λ|` in `|h(u)| ≤ c_h|u|^b`.
    pub fn envelope(&self) -> f64 {
        self.lambda.norm()
    }

    /// Evaluates `h(u)`.
    pub fn eval(&self, u: Complex64) -> Complex64 {
        match self.family {
            NonlinearityFamily::Zero => Complex64::new(0.0, 0.0),
            NonlinearityFamily::Linear => self.lambda * u,
            NonlinearityFamily::IntegerPower => self.lambda * u.powu(self.exponent as u32),
            NonlinearityFamily::ModulusPower => {
                self.lambda * u * u.norm().powf(self.exponent - 1.0)
            }
        }
    }

    /// Directional derivative `d/ds h(u + s·dir)` at `s = 0`.
    ///
    /// For the holomorphic families this is `h′(u)·dir`. Its modulus is
    /// bounded by `c_h·b·|u|^{b−1}·|dir|` for every family.
    pub fn directional_derivative(&self, u: Complex64, dir: Complex64) -> Complex64 {
        let b = self.exponent;
        match self.family {
            NonlinearityFamily::Zero => Complex64::new(0.0, 0.0),
            NonlinearityFamily::Linear => self.lambda * dir,
            NonlinearityFamily::IntegerPower => {
                self.lambda * b * u.powu(self.exponent as u32 - 1) * dir
            }
            NonlinearityFamily::ModulusPower => {
                let r = u.norm();
                if r == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                // d|u+sd|/ds = Re(conj(u)·d)/|u|
                let radial = (u.conj() * dir).re / r;
                self.lambda * (dir * r.powf(b - 1.0) + u * ((b - 1.0) * r.powf(b - 2.0) * radial))
            }
        }
    }
}

fn check_coefficient(lambda: Complex64) -> Result<(), Error> {
    require(lambda.re.is_finite(), "lambda.re", lambda.re, "finite")?;
    require(lambda.im.is_finite(), "lambda.im", lambda.im, "finite")
}

/// Exponentially decaying forcing `f(t) = A·e^{−a₁t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forcing {
    amplitude: Complex64,
    rate: f64,
}

impl Forcing {
    /// `f(t) = amplitude·e^{−rate·t}` with `rate > 0`.
    pub fn exp_decay(amplitude: Complex64, rate: f64) -> Result<Self, Error> {
        require(amplitude.re.is_finite(), "A.re", amplitude.re, "finite")?;
        require(amplitude.im.is_finite(), "A.im", amplitude.im, "finite")?;
        require(rate.is_finite() && rate > 0.0, "a1", rate, "finite and > 0")?;
        Ok(Self { amplitude, rate })
    }

    /// The amplitude `A = f(0)`.
    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    /// The decay rate `a₁`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `f(t)`.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.amplitude * (-self.rate * t).exp()
    }

    /// `f′(t)`, analytically.
    pub fn eval_derivative(&self, t: f64) -> Complex64 {
        self.amplitude * (-self.rate * (-self.rate * t).exp())
    }
}

/// Tight constants for the growth assumptions of a [`Problem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeConstants {
    /// `c_h = |λ|`: `|h(u)| ≤ c_h|u|^b`.
    pub nonlinearity: f64,
    /// `c_f = |A|(1 + a·a₁)`: `|f(t)| + a|f′(t)| ≤ c_f e^{−a₁t}`.
    pub forcing: f64,
    /// `c_F = |A|·|a − a₁|`: `|f′(t) + a f(t)| ≤ c_F e^{−a₁t}`.
    pub ode_forcing: f64,
}

/// An instance of the integral equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    kernel_rate: f64,
    nonlinearity: Nonlinearity,
    forcing: Forcing,
}

impl Problem {
    /// Builds a problem with kernel `e^{−a(t−s)}`, `a > 0`.
    pub fn new(
        kernel_rate: f64,
        nonlinearity: Nonlinearity,
        forcing: Forcing,
    ) -> Result<Self, Error> {
        require(
            kernel_rate.is_finite() && kernel_rate > 0.0,
            "a",
            kernel_rate,
            "finite and > 0",
        )?;
        Ok(Self {
            kernel_rate,
            nonlinearity,
            forcing,
        })
    }

    /// Kernel decay rate `a`.
    pub fn kernel_rate(&self) -> f64 {
        self.kernel_rate
    }

    /// The nonlinearity `h`.
    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nonlinearity
    }

    /// The forcing `f`.
    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    /// `u(0) = f(0)`.
    pub fn initial_value(&self) -> Complex64 {
        self.forcing.eval(0.0)
    }

    /// Source term of the equivalent ODE, `F(t) = f′(t) + a·f(t)`.
    pub fn ode_forcing(&self, t: f64) -> Complex64 {
        self.forcing.eval_derivative(t) + self.forcing.eval(t) * self.kernel_rate
    }

    /// Right-hand side `−a·u + h(u) + F(t)` of the equivalent ODE.
    pub fn ode_rhs(&self, t: f64, u: Complex64) -> Complex64 {
        -u * self.kernel_rate + self.nonlinearity.eval(u) + self.ode_forcing(t)
    }

    /// The tight envelope constants for this instance.
    pub fn envelope_constants(&self) -> EnvelopeConstants {
        let amp = self.forcing.amplitude.norm();
        let a = self.kernel_rate;
        let a1 = self.forcing.rate;
        EnvelopeConstants {
            nonlinearity: self.nonlinearity.envelope(),
            forcing: amp * (1.0 + a * a1),
            ode_forcing: amp * (a - a1).abs(),
        }
    }

    /// True when `λ` and `A` are real, so every solution stays real.
    pub fn is_real(&self) -> bool {
        self.nonlinearity.lambda.im == 0.0 && self.forcing.amplitude.im == 0.0
    }
}
