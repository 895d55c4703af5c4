//! Batch front end for `expvolterra`: reads TOML problem files, runs the
//! certify / solve / verify pipelines and writes JSON reports and CSV
//! trajectories.
//!
//! Exit codes: 0 success, 1 input error, 2 certificate (or certified bound)
//! failure, 3 solver non-convergence or divergence.

// `!(x <= y)` is used deliberately so NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod file;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expvolterra::comparison::{
    check_initial_condition, check_mu_condition, compare_to_envelope, spec_from_problem,
};
use expvolterra::{
    certify, solve_ode, solve_picard, verify_bound, Certificate, Envelope, Grid, PicardOptions,
    Problem, Trajectory,
};

use crate::file::{InputError, ProblemFile};
use crate::report::{
    BoundEntry, BoundSection, ComparisonSection, OdeSection, Outcome, PicardSection,
    ProblemSummary, Report, SolversReport, Timing,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    InputError = 1,
    CertificateFailed = 2,
    SolverFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn label(self) -> &'static str {
        match self {
            ExitStatus::Success => "ok",
            ExitStatus::InputError => "input-error",
            ExitStatus::CertificateFailed => "certificate-failed",
            ExitStatus::SolverFailure => "solver-failure",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "expvolterra",
    version,
    about = "Certify and solve u(t) = ∫₀ᵗ e^{−a(t−s)} h(u(s)) ds + f(t)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the sufficient conditions for global existence and decay.
    Certify(CommonArgs),
    /// Solve numerically and optionally write the trajectory as CSV.
    Solve(SolveArgs),
    /// Certify, solve with both methods and check the certified envelope.
    Verify(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Problem file (TOML).
    pub input: PathBuf,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override solver.margin.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Override solver.slack.
    #[arg(long)]
    pub slack: Option<f64>,
    /// Override grid.T.
    #[arg(long = "grid-T")]
    pub grid_horizon: Option<f64>,
    /// Override grid.n.
    #[arg(long = "grid-n")]
    pub grid_steps: Option<usize>,
    /// Omit wall-clock timings so the report is byte-for-byte reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Picard,
    Ode,
    Both,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Which solver(s) to run.
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Write the trajectory as CSV.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

struct Loaded {
    problem: Problem,
    grid: Grid,
    picard: PicardOptions,
    margin: f64,
    slack: f64,
}

fn load(args: &CommonArgs) -> Result<Loaded, InputError> {
    let mut file = ProblemFile::read(&args.input)?;
    if let Some(m) = args.margin {
        file.solver.margin = m;
    }
    if let Some(s) = args.slack {
        file.solver.slack = s;
    }
    if let Some(t) = args.grid_horizon {
        file.grid.horizon = t;
    }
    if let Some(n) = args.grid_steps {
        file.grid.n = n;
    }
    file.check_options()?;
    Ok(Loaded {
        problem: file.problem()?,
        grid: file.grid()?,
        picard: file.picard_options()?,
        margin: file.solver.margin,
        slack: file.solver.slack,
    })
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

struct Run {
    report: Report,
    status: ExitStatus,
}

fn base_report(command: &'static str, l: &Loaded, cert: &Certificate) -> Report {
    Report {
        command,
        problem: ProblemSummary::new(&l.problem, l.grid.horizon(), l.grid.steps()),
        certificate: cert.into(),
        solvers: None,
        bound: None,
        comparison: None,
        outcome: Outcome {
            status: ExitStatus::Success.label(),
            exit_code: 0,
            message: None,
        },
        timing: None,
    }
}

fn finish(mut report: Report, status: ExitStatus, message: Option<String>) -> Run {
    report.outcome = Outcome {
        status: status.label(),
        exit_code: status.code(),
        message,
    };
    Run { report, status }
}

fn run_certify(l: &Loaded) -> Run {
    let start = Instant::now();
    let cert = certify(&l.problem, l.margin).expect("margin validated on load");
    let mut report = base_report("certify", l, &cert);
    report.timing = Some(Timing {
        certify_ms: ms(start),
        total_ms: ms(start),
        ..Timing::default()
    });
    if cert.passes() {
        finish(report, ExitStatus::Success, None)
    } else {
        let why = cert
            .rejection()
            .map(|r| r.to_string())
            .or_else(|| cert.first_failure().map(|f| format!("{} failed", f.name)));
        finish(report, ExitStatus::CertificateFailed, why)
    }
}

struct Solutions {
    picard: Option<Trajectory>,
    ode: Option<Trajectory>,
}

fn solve_methods(
    l: &Loaded,
    method: Method,
    report: &mut Report,
    timing: &mut Timing,
) -> Result<Solutions, String> {
    let mut solvers = SolversReport::default();
    let mut out = Solutions {
        picard: None,
        ode: None,
    };
    let mut failure = None;
    if matches!(method, Method::Picard | Method::Both) {
        let start = Instant::now();
        match solve_picard(&l.problem, l.grid, &l.picard) {
            Ok(sol) => {
                solvers.picard = Some(PicardSection {
                    iterations: sol.iterations,
                    final_delta: sol.final_delta,
                    contraction_ratios: sol.contraction_ratios(),
                });
                out.picard = Some(sol.trajectory);
            }
            Err(e) => failure = Some(format!("picard: {e}")),
        }
        timing.picard_ms = Some(ms(start));
    }
    if failure.is_none() && matches!(method, Method::Ode | Method::Both) {
        let start = Instant::now();
        match solve_ode(&l.problem, l.grid) {
            Ok(u) => {
                solvers.ode = Some(OdeSection {
                    steps: l.grid.steps(),
                });
                out.ode = Some(u);
            }
            Err(e) => failure = Some(format!("ode: {e}")),
        }
        timing.ode_ms = Some(ms(start));
    }
    if let (Some(p), Some(o)) = (&out.picard, &out.ode) {
        solvers.sup_distance = Some(p.sup_distance(o).expect("same grid"));
    }
    report.solvers = Some(solvers);
    match failure {
        Some(msg) => Err(msg),
        None => Ok(out),
    }
}

fn run_solve(l: &Loaded, method: Method, csv_path: Option<&Path>) -> Result<Run, InputError> {
    let start = Instant::now();
    let cert = certify(&l.problem, l.margin).expect("margin validated on load");
    let mut timing = Timing {
        certify_ms: ms(start),
        ..Timing::default()
    };
    let mut report = base_report("solve", l, &cert);
    let solutions = solve_methods(l, method, &mut report, &mut timing);
    timing.total_ms = ms(start);
    report.timing = Some(timing);
    let solutions = match solutions {
        Ok(s) => s,
        Err(msg) => return Ok(finish(report, ExitStatus::SolverFailure, Some(msg))),
    };
    if let Some(path) = csv_path {
        write_csv(path, &l.grid, &solutions, cert.envelope()).map_err(|e| InputError {
            field: None,
            line: None,
            message: format!("cannot write {}: {e}", path.display()),
        })?;
    }
    Ok(finish(report, ExitStatus::Success, None))
}

fn run_verify(l: &Loaded) -> Run {
    let start = Instant::now();
    let cert = certify(&l.problem, l.margin).expect("margin validated on load");
    let mut timing = Timing {
        certify_ms: ms(start),
        ..Timing::default()
    };
    let mut report = base_report("verify", l, &cert);
    if !cert.passes() {
        timing.total_ms = ms(start);
        report.timing = Some(timing);
        return finish(
            report,
            ExitStatus::CertificateFailed,
            Some("certificate failed; nothing solved".into()),
        );
    }
    let solutions = solve_methods(l, Method::Both, &mut report, &mut timing);
    let solutions = match solutions {
        Ok(s) => s,
        Err(msg) => {
            timing.total_ms = ms(start);
            report.timing = Some(timing);
            return finish(report, ExitStatus::SolverFailure, Some(msg));
        }
    };
    let picard = solutions.picard.as_ref().expect("both methods ran");
    let ode = solutions.ode.as_ref().expect("both methods ran");

    let bound_picard = verify_bound(picard, &cert, l.slack).expect("certificate passes");
    let bound_ode = verify_bound(ode, &cert, l.slack).expect("certificate passes");
    report.bound = Some(BoundSection {
        picard: Some((&bound_picard).into()),
        ode: Some((&bound_ode).into()),
    });

    let spec = spec_from_problem(&l.problem, &cert).expect("certificate passes");
    let mu = check_mu_condition(&spec, &l.grid).expect("p < a for passing certificates");
    let initial = check_initial_condition(&spec);
    let env_picard = compare_to_envelope(&picard.modulus(), &spec, &l.grid, l.slack)
        .expect("moduli are non-negative");
    let env_ode = compare_to_envelope(&ode.modulus(), &spec, &l.grid, l.slack)
        .expect("moduli are non-negative");
    report.comparison = Some(ComparisonSection {
        mu_condition: (&mu).into(),
        initial_condition: initial,
        envelope: BoundSection {
            picard: Some(BoundEntry::from(&env_picard)),
            ode: Some(BoundEntry::from(&env_ode)),
        },
    });
    timing.total_ms = ms(start);
    report.timing = Some(timing);

    let bounds_hold = bound_picard.holds() && bound_ode.holds();
    let chain_holds = mu.holds && initial && env_picard.holds() && env_ode.holds();
    if bounds_hold && chain_holds {
        finish(report, ExitStatus::Success, None)
    } else if !bounds_hold {
        finish(
            report,
            ExitStatus::CertificateFailed,
            Some("certified bound violated".into()),
        )
    } else {
        finish(
            report,
            ExitStatus::CertificateFailed,
            Some("comparison chain failed despite a passing certificate".into()),
        )
    }
}

fn push_complex(row: &mut Vec<String>, u: expvolterra::Complex64) {
    row.push(u.re.to_string());
    row.push(u.im.to_string());
    row.push(u.norm().to_string());
}

/// Writes `t, re_u, im_u, abs_u[, envelope]`; with both methods the `u`
/// columns are suffixed `_picard` and `_ode`.
fn write_csv(
    path: &Path,
    grid: &Grid,
    solutions: &Solutions,
    envelope: Option<Envelope>,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    let both = solutions.picard.is_some() && solutions.ode.is_some();
    let mut header = vec!["t".to_string()];
    let columns: Vec<(&str, &Trajectory)> =
        [("picard", &solutions.picard), ("ode", &solutions.ode)]
            .into_iter()
            .filter_map(|(name, u)| u.as_ref().map(|u| (name, u)))
            .collect();
    for (name, _) in &columns {
        for col in ["re_u", "im_u", "abs_u"] {
            header.push(if both {
                format!("{col}_{name}")
            } else {
                col.to_string()
            });
        }
    }
    if envelope.is_some() {
        header.push("envelope".into());
    }
    w.write_record(&header)?;
    for (k, t) in grid.nodes().enumerate() {
        let mut row = vec![t.to_string()];
        for (_, u) in &columns {
            push_complex(&mut row, u.values()[k]);
        }
        if let Some(env) = envelope {
            row.push(env.bound(t).to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn emit(report: &Report, out: Option<&Path>) -> std::io::Result<()> {
    let text = report.to_json();
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (common, outcome) = match &cli.command {
        Command::Certify(c) => (c, load(c).map(|l| run_certify(&l))),
        Command::Verify(c) => (c, load(c).map(|l| run_verify(&l))),
        Command::Solve(s) => (
            &s.common,
            load(&s.common).and_then(|l| run_solve(&l, s.method, s.out_csv.as_deref())),
        ),
    };
    let mut run = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitStatus::InputError.code();
        }
    };
    if common.no_timing {
        run.report.timing = None;
    }
    if let Err(e) = emit(&run.report, common.out.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitStatus::InputError.code();
    }
    if let Some(msg) = &run.report.outcome.message {
        eprintln!("{}: {msg}", run.status.label());
    }
    run.status.code()
}
