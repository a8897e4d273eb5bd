use std::time::Instant;

use bregman_cc::backward::{backward_circumcenter, backward_pseudo_circumcenter, BackwardProblem};
use bregman_cc::bregman::{
    backward_bregman_project, bregman_distance, equidistance_tolerance, forward_bregman_project, Mode,
};
use bregman_cc::duality::{check_e_duality, check_pseudo_duality, DualityReport, DualityStatus};
use bregman_cc::forward::{forward_circumcenter, forward_pseudo_circumcenter, ForwardProblem, DEFAULT_SEED};
use bregman_cc::oracle::{verify_equidistance, VerificationReport};
use bregman_cc::{AffineFlat, Error, LegendreFunction, Membership, Note, Outcome, PointSet, SolutionSet, Vector};
use serde::Serialize;

use crate::json::{nums, Num};
use crate::problem::{Operation, ProblemFile};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unique,
    Empty,
    Flat,
    Warning,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Unique => "unique",
            Status::Empty => "empty",
            Status::Flat => "flat",
            Status::Warning => "warning",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationOut {
    pub claim: String,
    pub method: bregman_cc::oracle::Method,
    pub worst_residual: Num,
    pub tolerance: Num,
    pub verdict: bregman_cc::oracle::Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl From<&VerificationReport> for VerificationOut {
    fn from(r: &VerificationReport) -> Self {
        Self {
            claim: r.claim.clone(),
            method: r.method,
            worst_residual: Num(r.worst_residual),
            tolerance: Num(r.tolerance),
            verdict: r.verdict,
            reason: r.reason.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NoteOut {
    pub note: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Num>,
}

impl From<&Note> for NoteOut {
    fn from(n: &Note) -> Self {
        let (note, value, tolerance) = match n {
            Note::OutsideDomain => ("outside_domain", None, None),
            Note::OutsideConjugateDomain => ("outside_conjugate_domain", None, None),
            Note::NumericalNonexistence { best_residual } => ("numerical_nonexistence", Some(Num(*best_residual)), None),
            Note::VerificationFailed { gap, tolerance } => ("verification_failed", Some(Num(*gap)), Some(Num(*tolerance))),
            Note::FlatNotIntersectedWithDomain => ("flat_not_intersected_with_domain", None, None),
        };
        Self { note, value, tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SetOut {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Num>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub null_basis: Vec<Vec<Num>>,
}

impl From<&SolutionSet> for SetOut {
    fn from(s: &SolutionSet) -> Self {
        Self {
            kind: s.kind_name(),
            point: s.representative().map(nums),
            null_basis: s.null_basis().iter().map(nums).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityOut {
    pub status: DualityStatus,
    pub lhs: SetOut,
    pub rhs: SetOut,
    pub max_deviation: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<&DualityReport> for DualityOut {
    fn from(r: &DualityReport) -> Self {
        Self {
            status: r.status,
            lhs: (&r.lhs).into(),
            rhs: (&r.rhs).into(),
            max_deviation: Num(r.max_deviation),
            witness: r.witness.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityPair {
    pub pseudo: DualityOut,
    pub e_set: DualityOut,
}

/// The structured answer to one problem file.
///
/// `points` and `residuals` run in parallel. For circumcenter operations the
/// residual is the largest equidistance gap at the point; for projections it
/// is the final Newton residual; for `verify` it is the checked gap.
/// `distance` reports its answer in `value` and emits no point.
#[derive(Debug, Clone, Serialize)]
pub struct ResultFile {
    pub operation: Operation,
    pub function: String,
    pub dimension: usize,
    pub status: Status,
    pub points: Vec<Vec<Num>>,
    pub residuals: Vec<Num>,
    pub domain_flags: Vec<Membership>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub null_basis: Vec<Vec<Num>>,
    /// Solution of the linear system when it falls outside the domain.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_solution: Option<Vec<Num>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Num>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<NoteOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualityPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: Num,
    #[serde(skip)]
    pub exit_code: i32,
    /// Unrounded copies for in-process comparisons.
    #[serde(skip)]
    pub raw_points: Vec<Vector>,
    #[serde(skip)]
    pub raw_value: Option<f64>,
}

impl ResultFile {
    fn new(problem: &ProblemFile) -> Self {
        Self {
            operation: problem.operation,
            function: problem.function.clone(),
            dimension: problem.dim(),
            status: Status::Error,
            points: Vec::new(),
            residuals: Vec::new(),
            domain_flags: Vec::new(),
            null_basis: Vec::new(),
            raw_solution: None,
            value: None,
            notes: Vec::new(),
            verification: None,
            duality: None,
            error: None,
            timing_ms: Num(0.0),
            exit_code: EXIT_OK,
            raw_points: Vec::new(),
            raw_value: None,
        }
    }

    fn push_point(&mut self, f: &LegendreFunction, x: &Vector, residual: f64) {
        self.points.push(nums(x));
        self.residuals.push(Num(residual));
        self.domain_flags.push(f.membership(x));
        self.raw_points.push(x.clone());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization") + "\n"
    }
}

/// Command-line overrides of the file's options.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoProjection { .. } | Error::Invariant(_) => EXIT_SOLVER,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

/// Runs one problem. Never panics on bad input; errors are reported in the
/// result with the matching exit code.
pub fn execute(problem: &ProblemFile, overrides: Overrides) -> ResultFile {
    let started = Instant::now();
    let mut out = ResultFile::new(problem);
    if let Err(fail) = dispatch(problem, overrides, &mut out) {
        out.status = Status::Error;
        out.error = Some(fail.message);
        out.exit_code = fail.code;
    }
    out.timing_ms = Num(started.elapsed().as_secs_f64() * 1e3);
    out
}

fn dispatch(problem: &ProblemFile, overrides: Overrides, out: &mut ResultFile) -> Result<(), Failure> {
    let n = problem.dim();
    let f = LegendreFunction::by_name(&problem.function, n)?;
    let s = PointSet::new(problem.points.clone())?;
    let tol = overrides.tol.or(problem.options.tol);
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(input_error(format!("tolerance must be positive, got {t}")));
        }
    }
    let seed = overrides.seed.or(problem.options.seed).unwrap_or(DEFAULT_SEED);

    match problem.operation {
        Operation::BackwardCc => {
            let p = BackwardProblem::new(f.clone(), s.clone())?;
            record_outcome(out, &f, &s, &backward_circumcenter(&p)?, Mode::Backward, tol);
        }
        Operation::BackwardPseudo => {
            let p = BackwardProblem::new(f.clone(), s.clone())?;
            record_outcome(out, &f, &s, &backward_pseudo_circumcenter(&p)?, Mode::Backward, tol);
        }
        Operation::ForwardCc => {
            let p = ForwardProblem::new(f.clone(), s.clone())?;
            record_outcome(out, &f, &s, &forward_circumcenter(&p, seed)?, Mode::Forward, tol);
        }
        Operation::ForwardPseudo => {
            let p = ForwardProblem::new(f.clone(), s.clone())?;
            record_outcome(out, &f, &s, &forward_pseudo_circumcenter(&p)?, Mode::Forward, tol);
        }
        Operation::Distance => {
            let [x, y] = s.points() else {
                return Err(input_error(format!("distance needs exactly two points, got {}", s.len())));
            };
            let d = bregman_distance(&f, x, y)?;
            out.value = Some(Num(d));
            out.raw_value = Some(d);
            out.status = Status::Unique;
        }
        Operation::ProjectBackward | Operation::ProjectForward => {
            let [y] = s.points() else {
                return Err(input_error(format!("projection needs exactly one point, got {}", s.len())));
            };
            let spec = problem.options.flat.as_ref().ok_or_else(|| input_error("projection needs options.flat"))?;
            let flat = AffineFlat::new(
                Vector::from_column_slice(&spec.base),
                spec.directions.iter().map(|d| Vector::from_column_slice(d)).collect(),
            )?;
            let r = if problem.operation == Operation::ProjectBackward {
                backward_bregman_project(&f, &flat, y)?
            } else {
                forward_bregman_project(&f, &flat, y)?
            };
            out.push_point(&f, &r.point, r.residual);
            out.status = Status::Unique;
        }
        Operation::DualityCheck => {
            let pseudo = check_pseudo_duality(&f, &s)?;
            let e_set = check_e_duality(&f, &s)?;
            let mismatch = [&pseudo, &e_set].iter().any(|r| r.status == DualityStatus::Mismatch);
            out.status = match &pseudo.lhs {
                _ if mismatch => Status::Warning,
                SolutionSet::Unique(x) => {
                    out.push_point(&f, x, pseudo.max_deviation);
                    Status::Unique
                }
                SolutionSet::Empty => Status::Empty,
                SolutionSet::Flat { .. } => Status::Flat,
            };
            out.duality = Some(DualityPair { pseudo: (&pseudo).into(), e_set: (&e_set).into() });
        }
        Operation::Verify => {
            let c = problem.options.candidate.as_ref().ok_or_else(|| input_error("verify needs options.candidate"))?;
            let mode = problem.options.mode.ok_or_else(|| input_error("verify needs options.mode"))?;
            let c = Vector::from_column_slice(c);
            f.check_dim(&c)?;
            let tol = tol.unwrap_or_else(|| equidistance_tolerance(max_distance(&f, &s, &c, mode)));
            let report = verify_equidistance(&f, &s, &c, mode, tol);
            out.push_point(&f, &c, report.worst_residual);
            out.status = if report.passed() { Status::Unique } else { Status::Warning };
            out.verification = Some((&report).into());
        }
    }
    Ok(())
}

fn max_distance(f: &LegendreFunction, s: &PointSet, x: &Vector, mode: Mode) -> f64 {
    s.points()
        .iter()
        .filter_map(|q| match mode {
            Mode::Backward => bregman_distance(f, x, q).ok(),
            Mode::Forward => bregman_distance(f, q, x).ok(),
        })
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max)
}

/// Translates a circumcenter outcome, re-verifying any emitted point
/// independently of the solver before it is reported as unique.
fn record_outcome(out: &mut ResultFile, f: &LegendreFunction, s: &PointSet, o: &Outcome, mode: Mode, tol: Option<f64>) {
    out.notes = o.notes.iter().map(NoteOut::from).collect();
    out.status = match &o.set {
        SolutionSet::Unique(x) if o.point().is_some() => {
            let tol = tol.unwrap_or_else(|| equidistance_tolerance(max_distance(f, s, x, mode)));
            let report = verify_equidistance(f, s, x, mode, tol);
            out.push_point(f, x, report.worst_residual);
            let ok = report.passed() && !o.is_warning();
            out.verification = Some((&report).into());
            if ok {
                Status::Unique
            } else {
                Status::Warning
            }
        }
        SolutionSet::Unique(x) => {
            out.raw_solution = Some(nums(x));
            Status::Empty
        }
        SolutionSet::Empty if o.is_warning() => Status::Warning,
        SolutionSet::Empty => Status::Empty,
        SolutionSet::Flat { point, null_basis } => {
            out.push_point(f, point, o.gap.unwrap_or(f64::NAN));
            out.null_basis = null_basis.iter().map(nums).collect();
            Status::Flat
        }
    };
}
