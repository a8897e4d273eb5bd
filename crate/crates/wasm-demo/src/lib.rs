//! Browser bindings for the interactive demo page in `www/`.
//!
//! The page drags 2-D points around and asks for the four circumcenter-type
//! points plus the Bregman balls through them. All logic lives in plain Rust
//! functions so it can be tested natively; the `#[wasm_bindgen]` wrappers
//! only convert to and from JSON strings.

use bregman_cc::backward::{backward_circumcenter, backward_pseudo_circumcenter, BackwardProblem};
use bregman_cc::balls::ball_boundary;
use bregman_cc::bregman::{bregman_distance, Mode};
use bregman_cc::forward::{forward_circumcenter, forward_pseudo_circumcenter, ForwardProblem, DEFAULT_SEED};
use bregman_cc::linalg::classical_circumcenter;
use bregman_cc::{LegendreFunction, Outcome, PointSet, Result, Vector};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const BALL_SAMPLES: usize = 96;

/// One computed center, with the balls around every input point that pass
/// through it.
#[derive(Debug, Clone, Serialize)]
pub struct Center {
    pub status: String,
    pub point: Option<[f64; 2]>,
    pub radius: Option<f64>,
    pub balls: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Scene {
    pub function: String,
    pub backward_cc: Center,
    pub forward_cc: Center,
    pub backward_pseudo: Center,
    pub forward_pseudo: Center,
    pub classical: Option<[f64; 2]>,
    pub error: Option<String>,
}

fn pair(v: &Vector) -> [f64; 2] {
    [v[0], v[1]]
}

fn center(f: &LegendreFunction, s: &PointSet, outcome: Result<Outcome>, mode: Mode, with_balls: bool) -> Center {
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return Center { status: format!("error: {e}"), point: None, radius: None, balls: Vec::new() },
    };
    let Some(p) = outcome.point() else {
        let status = if outcome.is_warning() { "not found" } else { "empty" };
        return Center { status: status.into(), point: None, radius: None, balls: Vec::new() };
    };
    let radius = match mode {
        Mode::Backward => bregman_distance(f, p, s.first()),
        Mode::Forward => bregman_distance(f, s.first(), p),
    }
    .ok();
    let balls = match radius {
        Some(r) if with_balls => s
            .points()
            .iter()
            .filter_map(|q| ball_boundary(f, q, r, mode, BALL_SAMPLES).ok())
            .map(|b| b.iter().map(pair).collect())
            .collect(),
        _ => Vec::new(),
    };
    let status = if outcome.is_warning() { "unverified" } else { "unique" };
    Center { status: status.into(), point: Some(pair(p)), radius, balls }
}

fn empty_center(status: &str) -> Center {
    Center { status: status.into(), point: None, radius: None, balls: Vec::new() }
}

/// Every circumcenter-type point of a planar set. `coords` holds
/// `x0, y0, x1, y1, ...`.
pub fn scene(function: &str, coords: &[f64], with_balls: bool) -> Scene {
    let blank = |error: String| Scene {
        function: function.into(),
        backward_cc: empty_center("error"),
        forward_cc: empty_center("error"),
        backward_pseudo: empty_center("error"),
        forward_pseudo: empty_center("error"),
        classical: None,
        error: Some(error),
    };
    if coords.len() < 2 || !coords.len().is_multiple_of(2) {
        return blank(format!("expected an even number of coordinates, got {}", coords.len()));
    }
    let f = match LegendreFunction::by_name(function, 2) {
        Ok(f) => f,
        Err(e) => return blank(e.to_string()),
    };
    let s = match PointSet::new(coords.chunks(2).map(|c| c.to_vec()).collect()) {
        Ok(s) => s,
        Err(e) => return blank(e.to_string()),
    };
    let backward = BackwardProblem::new(f.clone(), s.clone());
    let forward = ForwardProblem::new(f.clone(), s.clone());
    let (backward_cc, backward_pseudo) = match &backward {
        Ok(p) => (
            center(&f, &s, backward_circumcenter(p), Mode::Backward, with_balls),
            center(&f, &s, backward_pseudo_circumcenter(p), Mode::Backward, false),
        ),
        Err(e) => (empty_center(&format!("error: {e}")), empty_center(&format!("error: {e}"))),
    };
    let (forward_cc, forward_pseudo) = match &forward {
        Ok(p) => (
            center(&f, &s, forward_circumcenter(p, DEFAULT_SEED), Mode::Forward, with_balls),
            center(&f, &s, forward_pseudo_circumcenter(p), Mode::Forward, false),
        ),
        Err(e) => (empty_center(&format!("error: {e}")), empty_center(&format!("error: {e}"))),
    };
    let classical = classical_circumcenter(&s).ok().and_then(|c| c.unique().map(pair));
    Scene { function: function.into(), backward_cc, forward_cc, backward_pseudo, forward_pseudo, classical, error: None }
}

/// `D_f(x, y)` for planar points, `NaN` on bad input.
pub fn distance(function: &str, x: &[f64], y: &[f64]) -> f64 {
    let Ok(f) = LegendreFunction::by_name(function, x.len()) else {
        return f64::NAN;
    };
    bregman_distance(&f, &Vector::from_column_slice(x), &Vector::from_column_slice(y)).unwrap_or(f64::NAN)
}

#[wasm_bindgen(js_name = scene)]
pub fn scene_json(function: &str, coords: &[f64], with_balls: bool) -> String {
    serde_json::to_string(&scene(function, coords, with_balls)).unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"))
}

#[wasm_bindgen(js_name = distance)]
pub fn distance_js(function: &str, x: &[f64], y: &[f64]) -> f64 {
    distance(function, x, y)
}
