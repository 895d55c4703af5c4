//! JSON reports. Field order is fixed by the struct definitions, so the same
//! input always serialises to the same bytes; wall-clock timings live in a
//! separate `timing` object that can be omitted.

use expvolterra::comparison::{DominanceTest, MuConditionReport};
use expvolterra::{BoundReport, Certificate, Problem};
use serde::Serialize;

use crate::file::{ComplexValue, FamilyName};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub problem: ProblemSummary,
    pub certificate: CertificateReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvers: Option<SolversReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonSection>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProblemSummary {
    pub a: f64,
    pub family: &'static str,
    pub lambda: ComplexValue,
    pub b: f64,
    #[serde(rename = "A")]
    pub amplitude: ComplexValue,
    pub a1: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub n: usize,
    pub c_h: f64,
    pub c_f: f64,
    #[serde(rename = "c_F")]
    pub c_ode_forcing: f64,
}

impl ProblemSummary {
    pub fn new(p: &Problem, horizon: f64, n: usize) -> Self {
        let env = p.envelope_constants();
        Self {
            a: p.kernel_rate(),
            family: FamilyName::from(p.nonlinearity().family()).as_str(),
            lambda: p.nonlinearity().lambda().into(),
            b: p.nonlinearity().exponent(),
            amplitude: p.forcing().amplitude().into(),
            a1: p.forcing().rate(),
            horizon,
            n,
            c_h: env.nonlinearity,
            c_f: env.forcing,
            c_ode_forcing: env.ode_forcing,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiteralSection {
    pub shared_constant: f64,
    pub constant_below_three_quarters: bool,
    pub self_map_lhs: f64,
    pub self_map_rhs: f64,
    pub self_map_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<&'static str>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub p: f64,
    pub q: Option<f64>,
    pub margin: f64,
    pub ledger: Vec<LedgerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shared_constant_form: Option<LiteralSection>,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        Self {
            pass: c.passes(),
            rejection: c.rejection().map(|r| r.to_string()),
            first_failure: c.first_failure().map(|f| f.name.as_str()),
            radius: c.radius(),
            p: c.decay_rate(),
            q: c.contraction_factor(),
            margin: c.margin(),
            ledger: c
                .checks()
                .iter()
                .map(|k| LedgerEntry {
                    name: k.name.as_str(),
                    lhs: k.lhs,
                    rhs: k.rhs,
                    strict: k.strict,
                    pass: k.pass,
                })
                .collect(),
            shared_constant_form: c.literal().map(|l| LiteralSection {
                shared_constant: l.shared_constant,
                constant_below_three_quarters: l.constant_below_three_quarters,
                self_map_lhs: l.self_map.0,
                self_map_rhs: l.self_map.1,
                self_map_pass: l.self_map.2,
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PicardSection {
    pub iterations: usize,
    pub final_delta: f64,
    pub contraction_ratios: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OdeSection {
    pub steps: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolversReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard: Option<PicardSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode: Option<OdeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_distance: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundEntry {
    pub max_ratio: f64,
    pub violated_at: Option<usize>,
    pub slack: f64,
    pub holds: bool,
}

impl From<&BoundReport> for BoundEntry {
    fn from(r: &BoundReport) -> Self {
        Self {
            max_ratio: r.max_ratio,
            violated_at: r.violated_at,
            slack: r.slack,
            holds: r.holds(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BoundSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard: Option<BoundEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode: Option<BoundEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuConditionEntry {
    pub holds: bool,
    pub test: &'static str,
    pub grid_holds: bool,
    pub worst_margin: f64,
}

impl From<&MuConditionReport> for MuConditionEntry {
    fn from(r: &MuConditionReport) -> Self {
        Self {
            holds: r.holds,
            test: match r.test {
                DominanceTest::Analytic => "analytic",
                DominanceTest::GridOnly => "grid-only",
            },
            grid_holds: r.grid_holds,
            worst_margin: r.worst_margin,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSection {
    pub mu_condition: MuConditionEntry,
    pub initial_condition: bool,
    pub envelope: BoundSection,
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub status: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timing {
    pub certify_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode_ms: Option<f64>,
    pub total_ms: f64,
}
