use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;
use serde::Serialize;

use crate::json::Num;
use crate::problem::{Expected, ProblemFile};
use crate::run::{execute, Overrides, ResultFile, Status, EXIT_OK};

#[derive(Debug, Serialize)]
pub struct FileReport {
    pub file: String,
    pub status: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Num>>,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    pub files: Vec<FileReport>,
}

/// Problem files in `dir`, sorted by name.
pub fn problem_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn run_suite(files: &[PathBuf], overrides: Overrides) -> SuiteReport {
    let files: Vec<FileReport> = files.par_iter().map(|path| run_file(path, overrides)).collect();
    let passed = files.iter().filter(|r| r.pass).count();
    SuiteReport { passed, failed: files.len() - passed, files }
}

fn run_file(path: &Path, overrides: Overrides) -> FileReport {
    let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let fail = |reason: String| FileReport { file: file.clone(), status: Status::Error.name(), pass: false, reason: Some(reason), point: None };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read: {e}")),
    };
    let problem = match ProblemFile::parse(&text) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let result = execute(&problem, overrides);
    let verdict = match (&problem.expected, result.exit_code) {
        (_, code) if code != EXIT_OK => Err(format!("exit code {code}: {}", result.error.clone().unwrap_or_default())),
        (Some(exp), _) => compare(exp, &result),
        (None, _) => Ok(()),
    };
    FileReport {
        file,
        status: result.status.name(),
        pass: verdict.is_ok(),
        reason: verdict.err(),
        point: result.points.first().cloned(),
    }
}

fn compare(exp: &Expected, result: &ResultFile) -> Result<(), String> {
    if let Some(status) = &exp.status {
        if status != result.status.name() {
            return Err(format!("status {}, expected {status}", result.status.name()));
        }
    }
    if let Some(want) = &exp.point {
        let got = result.raw_points.first().ok_or("no point in the result")?;
        if got.len() != want.len() {
            return Err(format!("point has dimension {}, expected {}", got.len(), want.len()));
        }
        let dev = got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if !(dev <= exp.tol) {
            return Err(format!("point {:?} deviates from {want:?} by {dev:e} > {:e}", got.as_slice(), exp.tol));
        }
    }
    if let Some(want) = exp.value {
        let got = result.raw_value.ok_or("no value in the result")?;
        if !((got - want).abs() <= exp.tol) {
            return Err(format!("value {got} deviates from {want} by more than {:e}", exp.tol));
        }
    }
    Ok(())
}
