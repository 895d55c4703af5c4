//! Problem files: TOML documents describing one equation instance, its grid
//! and solver options.
//!
//! ```toml
//! a = 2.0
//!
//! [nonlinearity]
//! family = "integer-power"     # zero | linear | integer-power | modulus-power
//! lambda = { re = -0.5 }       # im defaults to 0
//! b = 2
//!
//! [forcing]
//! A = { re = 0.1, im = 0.0 }
//! a1 = 1.0
//!
//! [grid]                       # optional
//! T = 20.0
//! n = 20000
//!
//! [solver]                     # optional
//! tol = 1e-12
//! max_iter = 200
//! margin = 0.02
//! slack = 1e-6
//! ```

use std::fmt;
use std::path::Path;

use expvolterra::{
    Complex64, Error as CoreError, Forcing, Grid, Nonlinearity, NonlinearityFamily, PicardOptions,
    Problem,
};
use serde::{Deserialize, Serialize};

pub const DEFAULT_HORIZON: f64 = 20.0;
pub const DEFAULT_STEPS: usize = 20_000;

/// A complex number written as `{ re = .., im = .. }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        Complex64::new(v.re, v.im)
    }
}

impl From<Complex64> for ComplexValue {
    fn from(v: Complex64) -> Self {
        Self { re: v.re, im: v.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Zero,
    Linear,
    IntegerPower,
    ModulusPower,
}

impl From<FamilyName> for NonlinearityFamily {
    fn from(f: FamilyName) -> Self {
        match f {
            FamilyName::Zero => NonlinearityFamily::Zero,
            FamilyName::Linear => NonlinearityFamily::Linear,
            FamilyName::IntegerPower => NonlinearityFamily::IntegerPower,
            FamilyName::ModulusPower => NonlinearityFamily::ModulusPower,
        }
    }
}

impl From<NonlinearityFamily> for FamilyName {
    fn from(f: NonlinearityFamily) -> Self {
        match f {
            NonlinearityFamily::Zero => FamilyName::Zero,
            NonlinearityFamily::Linear => FamilyName::Linear,
            NonlinearityFamily::IntegerPower => FamilyName::IntegerPower,
            NonlinearityFamily::ModulusPower => FamilyName::ModulusPower,
        }
    }
}

impl FamilyName {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyName::Zero => "zero",
            FamilyName::Linear => "linear",
            FamilyName::IntegerPower => "integer-power",
            FamilyName::ModulusPower => "modulus-power",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySection {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingSection {
    #[serde(rename = "A")]
    pub amplitude: ComplexValue,
    pub a1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "T", default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_steps")]
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            horizon: DEFAULT_HORIZON,
            n: DEFAULT_STEPS,
        }
    }
}

fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_slack")]
    pub slack: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: default_max_iter(),
            margin: default_margin(),
            slack: default_slack(),
        }
    }
}

fn default_tol() -> f64 {
    PicardOptions::default().tol
}

fn default_max_iter() -> usize {
    PicardOptions::default().max_iter
}

fn default_margin() -> f64 {
    expvolterra::certify::DEFAULT_MARGIN
}

fn default_slack() -> f64 {
    expvolterra::solver::DEFAULT_SLACK
}

/// The on-disk problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub a: f64,
    pub nonlinearity: NonlinearitySection,
    pub forcing: ForcingSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
}

/// A diagnostic for malformed or invalid input.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    /// Dotted path of the offending field, when known.
    pub field: Option<String>,
    /// 1-based line in the source file, when known.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for InputError {}

impl InputError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: Some(field.into()),
            line: None,
            message: message.into(),
        }
    }
}

/// Human-readable type expected at a dotted field path.
pub fn expected_type(path: &str) -> &'static str {
    match path {
        "nonlinearity.family" => {
            "a string: one of \"zero\", \"linear\", \"integer-power\", \"modulus-power\""
        }
        "nonlinearity" | "forcing" | "grid" | "solver" => "a table",
        "nonlinearity.lambda" | "forcing.A" => "a table { re = <number>, im = <number> }",
        "grid.n" | "solver.max_iter" => "a non-negative integer",
        _ => "a number",
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ProblemFile {
    /// Parses TOML text, reporting the dotted path of the first bad field.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let de = toml::Deserializer::parse(text).map_err(|e| InputError {
            field: None,
            line: e.span().map(|s| line_of(text, s.start)),
            message: format!("syntax error: {}", e.message()),
        })?;
        serde_path_to_error::deserialize(de).map_err(|e| {
            let mut path = e.path().to_string();
            if path == "." {
                path.clear();
            }
            let inner = e.inner();
            let line = inner.span().map(|s| line_of(text, s.start));
            let message = inner.message().to_string();
            if let Some(rest) = message.strip_prefix("missing field `") {
                let name = rest.trim_end_matches('`');
                let full = if path.is_empty() {
                    name.to_string()
                } else {
                    format!("{path}.{name}")
                };
                let expected = expected_type(&full);
                return InputError {
                    field: Some(full),
                    line,
                    message: format!("missing required field, expected {expected}"),
                };
            }
            InputError {
                field: (!path.is_empty()).then_some(path),
                line,
                message,
            }
        })
    }

    /// Reads and parses a problem file.
    pub fn read(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError {
            field: None,
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Serialises back to TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files always serialise")
    }

    /// Builds the validated equation instance.
    pub fn problem(&self) -> Result<Problem, InputError> {
        let nl = &self.nonlinearity;
        let lambda = match (nl.family, nl.lambda) {
            (FamilyName::Zero, l) => l.map(Complex64::from).unwrap_or_default(),
            (_, Some(l)) => l.into(),
            (_, None) => {
                return Err(InputError::field(
                    "nonlinearity.lambda",
                    format!(
                        "missing required field, expected {}",
                        expected_type("nonlinearity.lambda")
                    ),
                ))
            }
        };
        let b = match (nl.family, nl.b) {
            (FamilyName::IntegerPower | FamilyName::ModulusPower, None) => {
                return Err(InputError::field(
                    "nonlinearity.b",
                    "missing required field, expected a number >= 2",
                ))
            }
            (_, b) => b.unwrap_or(1.0),
        };
        let h = Nonlinearity::from_parts(nl.family.into(), lambda, b).map_err(map_core)?;
        let f =
            Forcing::exp_decay(self.forcing.amplitude.into(), self.forcing.a1).map_err(map_core)?;
        Problem::new(self.a, h, f).map_err(map_core)
    }

    /// The grid.
    pub fn grid(&self) -> Result<Grid, InputError> {
        Grid::new(self.grid.horizon, self.grid.n).map_err(map_core)
    }

    /// Picard options.
    pub fn picard_options(&self) -> Result<PicardOptions, InputError> {
        let s = &self.solver;
        if !(s.tol > 0.0) {
            return Err(InputError::field("solver.tol", "must be > 0"));
        }
        if s.max_iter == 0 {
            return Err(InputError::field("solver.max_iter", "must be >= 1"));
        }
        Ok(PicardOptions {
            tol: s.tol,
            max_iter: s.max_iter,
            ..PicardOptions::default()
        })
    }

    /// Validates margin and slack.
    pub fn check_options(&self) -> Result<(), InputError> {
        let s = &self.solver;
        if !(s.margin > 0.0 && s.margin < 1.0) {
            return Err(InputError::field("solver.margin", "must lie in (0, 1)"));
        }
        if !(s.slack >= 0.0) {
            return Err(InputError::field("solver.slack", "must be >= 0"));
        }
        Ok(())
    }
}

fn map_core(e: CoreError) -> InputError {
    match e {
        CoreError::InvalidParameter {
            name,
            value,
            requirement,
        } => {
            let field = match name {
                "a" => "a",
                "b" => "nonlinearity.b",
                "lambda.re" => "nonlinearity.lambda.re",
                "lambda.im" => "nonlinearity.lambda.im",
                "A.re" => "forcing.A.re",
                "A.im" => "forcing.A.im",
                "a1" => "forcing.a1",
                "T" => "grid.T",
                "n" => "grid.n",
                other => other,
            };
            InputError::field(
                field,
                format!("value {value} is invalid: must be {requirement}"),
            )
        }
        other => InputError {
            field: None,
            line: None,
            message: other.to_string(),
        },
    }
}
