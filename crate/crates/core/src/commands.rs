//! Command implementations behind the `gradedcontact` binary.
//!
//! Each command yields a [`Report`] and an exit [`Status`]:
//! 0 pass/valid, 1 structure invalid, 2 usage or parse error,
//! 3 internal invariant failure.

use std::path::Path;

use crate::cartan::{interior_product, lie_derivative};
use crate::check::Check;
use crate::error::Error;
use crate::io::{LoadError, Report, StructureFile};
use crate::jacobi::{build_h, build_q, is_jacobi, JacobiStructure};
use crate::selftest;
use crate::sympoiss::{poissonize, verify_diagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Invalid,
    Usage,
    Internal,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Invalid => 1,
            Status::Usage => 2,
            Status::Internal => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileCommand {
    Check,
    BuildQ,
    Poissonize,
    VerifyDiagram,
}

impl FileCommand {
    pub fn name(self) -> &'static str {
        match self {
            FileCommand::Check => "check",
            FileCommand::BuildQ => "build-q",
            FileCommand::Poissonize => "poissonize",
            FileCommand::VerifyDiagram => "verify-diagram",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub report: Option<Report>,
    pub error: Option<String>,
}

impl Outcome {
    fn failed(status: Status, error: impl ToString) -> Self {
        Outcome {
            status,
            report: None,
            error: Some(error.to_string()),
        }
    }

    /// Standard output for the chosen format; empty when no report was made.
    pub fn render(&self, format: Format) -> String {
        match (&self.report, format) {
            (Some(r), Format::Text) => r.to_text(),
            (Some(r), Format::Json) => r.to_json(),
            (None, _) => String::new(),
        }
    }
}

fn load_failure(e: LoadError) -> Outcome {
    match e {
        LoadError::Algebra(inner) => internal(inner),
        other => Outcome::failed(Status::Usage, other),
    }
}

fn internal(e: Error) -> Outcome {
    let status = match e {
        Error::WrongMultidegree(_) | Error::DuplicateName(_) | Error::UnknownCoordinate(_) => Status::Usage,
        _ => Status::Internal,
    };
    Outcome::failed(status, e)
}

pub fn run_file(command: FileCommand, path: impl AsRef<Path>) -> Outcome {
    let path = path.as_ref();
    match std::fs::read_to_string(path) {
        Ok(source) => run_source(command, &source),
        Err(e) => Outcome::failed(
            Status::Usage,
            LoadError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            },
        ),
    }
}

/// Runs a command on the text of a structure file.
pub fn run_source(command: FileCommand, source: &str) -> Outcome {
    let file = match StructureFile::parse(source) {
        Ok(f) => f,
        Err(e) => return load_failure(e),
    };
    let j = match file.to_structure() {
        Ok(j) => j,
        Err(e) => return load_failure(e),
    };
    let echo = match StructureFile::from_structure(&j, file.name.clone()) {
        Ok(f) => serde_json::to_value(f).expect("structure file serializes"),
        Err(e) => return load_failure(e),
    };
    let mut report = Report::new(command.name());
    report.echo = Some(echo);
    let status = match command {
        FileCommand::Check => check(&j, &mut report),
        FileCommand::BuildQ => build_q_report(&j, &mut report),
        FileCommand::Poissonize => poissonize_report(&j, &mut report),
        FileCommand::VerifyDiagram => diagram_report(&j, &mut report),
    };
    match status {
        Ok(status) => Outcome {
            status,
            report: Some(report),
            error: None,
        },
        Err(e) => internal(e),
    }
}

fn valid(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Invalid
    }
}

fn check(j: &JacobiStructure, report: &mut Report) -> crate::Result<Status> {
    let verdict = is_jacobi(j)?;
    report.push_checks(&[
        Check::new("[Λ,Λ] − 2RΛ = 0", verdict.residuals.lambda_lambda.clone()),
        Check::new("[R,Λ] = 0", verdict.residuals.r_lambda.clone()),
        Check::new("ι_[Q,Q] α = 0", verdict.residuals.obstruction.clone()),
    ]);
    for (name, p) in &verdict.q_squared_on_generators {
        report.push(format!("Q²({name}) = 0"), p.is_zero(), p.to_string());
    }
    report.result("is_jacobi", verdict.is_jacobi.to_string());
    Ok(valid(verdict.is_jacobi))
}

fn build_q_report(j: &JacobiStructure, report: &mut Report) -> crate::Result<Status> {
    let q = build_q(j)?;
    let h = build_h(j)?;
    let model = j.model();
    let r = j.r().transport(model.chart())?;
    report.push_checks(&[
        Check::new("ι_Q α = Λ + θR", &interior_product(&q, model.alpha())? - &h),
        Check::new("L_Q α = −Rα", &lie_derivative(&q, model.alpha())? + &(&r * model.alpha())),
    ]);
    report.result("Q", q.to_string());
    report.result("h", h.to_string());
    Ok(Status::Pass)
}

fn poissonize_report(j: &JacobiStructure, report: &mut Report) -> crate::Result<Status> {
    let p = match poissonize(j) {
        Ok(p) => p,
        Err(Error::PathMismatch { direct, lifted }) => {
            report.push("Poissonization paths agree", false, format!("{direct} vs {lifted}"));
            return Ok(Status::Internal);
        }
        Err(e) => return Err(e),
    };
    report.push("Poissonization paths agree", true, "0");
    report.push_checks(&[Check::new("[Π,Π] = 0", p.residual.clone())]);
    report.result("Pi", p.pi.to_string());
    report.result("H_Q", p.hamiltonian.to_string());
    Ok(valid(p.residual.is_zero()))
}

fn diagram_report(j: &JacobiStructure, report: &mut Report) -> crate::Result<Status> {
    let d = verify_diagram(j)?;
    report.push_checks(&d.construction);
    report.push_checks(&d.validity);
    report.result("Pi", d.pi.to_string());
    report.result("is_jacobi", d.is_jacobi.to_string());
    report.result("commutes", d.commutes().to_string());
    Ok(if !d.commutes() {
        Status::Internal
    } else {
        valid(d.is_jacobi)
    })
}

pub fn run_selftest(config: &selftest::Config) -> Outcome {
    let report = selftest::run(config);
    let status = if report.passed() { Status::Pass } else { Status::Internal };
    Outcome {
        status,
        report: Some(report),
        error: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::CORPUS;

    #[test]
    fn exit_codes_on_corpus() {
        for e in CORPUS {
            let out = run_source(FileCommand::Check, e.source);
            let expected = if e.jacobi { Status::Pass } else { Status::Invalid };
            assert_eq!(out.status, expected, "{}", e.file);
            assert_eq!(run_source(FileCommand::BuildQ, e.source).status, Status::Pass);
            assert_eq!(run_source(FileCommand::Poissonize, e.source).status, expected);
            assert_eq!(run_source(FileCommand::VerifyDiagram, e.source).status, expected);
        }
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_source(FileCommand::Check, "not json").status, Status::Usage);
        assert_eq!(run_file(FileCommand::Check, "/nonexistent.jacobi").status, Status::Usage);
        let bad = r#"{"format":"jacobi/1","base":["x"],"r":[{"coeff":"x^-1","i":0}]}"#;
        assert_eq!(run_source(FileCommand::Check, bad).status, Status::Usage);
    }

    #[test]
    fn so3_residuals_print_zero() {
        let out = run_source(FileCommand::Check, crate::corpus::entry("so3.jacobi").unwrap().source);
        let report = out.report.unwrap();
        assert_eq!(report.verdicts[0].residual, "0");
        assert_eq!(report.verdicts[1].residual, "0");
        assert_eq!(report.echo.unwrap()["name"], "so(3) Lie-Poisson");
    }
}
