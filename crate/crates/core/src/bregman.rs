//! Bregman distances and Bregman projections onto affine flats.

use serde::{Deserialize, Serialize};

use crate::linalg::AffineFlat;
use crate::newton::damped_newton;
use crate::numeric::compensated_sum;
use crate::tolerances::{CC_TOL, MAX_HALVINGS, NEWTON_TOL};
use crate::{Error, LegendreFunction, Matrix, Result, Vector};

/// `D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>`.
///
/// Infinite when `y` is not in the interior of `dom f` or `x` is outside
/// `dom f`. Boundary points are allowed in the first slot.
pub fn bregman_distance(f: &LegendreFunction, x: &Vector, y: &Vector) -> Result<f64> {
    f.check_dim(x)?;
    f.check_dim(y)?;
    if !f.membership(y).is_interior() || !f.membership(x).in_domain() {
        return Ok(f64::INFINITY);
    }
    Ok(distance_unchecked(f, x, y))
}

pub(crate) fn distance_unchecked(f: &LegendreFunction, x: &Vector, y: &Vector) -> f64 {
    let gy = f.gradient_unchecked(y);
    let linear = gy.iter().zip(x.iter().zip(y.iter())).map(|(g, (a, b))| -g * (a - b));
    compensated_sum(
        [f.value_unchecked(x), -f.value_unchecked(y)]
            .into_iter()
            .chain(linear),
    )
}

/// `(D_f(x, y), D_{f*}(grad f(y), grad f(x)))`; the two agree for
/// Legendre `f`.
pub fn bregman_distance_dual_check(
    f: &LegendreFunction,
    x: &Vector,
    y: &Vector,
) -> Result<(f64, f64)> {
    let gx = f.grad(x)?;
    let gy = f.grad(y)?;
    let conj = f.conjugate()?;
    Ok((bregman_distance(f, x, y)?, bregman_distance(&conj, &gy, &gx)?))
}

/// Largest `|D_f(x, q_i) - D_f(x, q_0)|` and largest `D_f(x, q_i)`.
pub(crate) fn backward_gap(f: &LegendreFunction, points: &[Vector], x: &Vector) -> (f64, f64) {
    let ds: Vec<f64> = points
        .iter()
        .map(|q| bregman_distance(f, x, q).unwrap_or(f64::INFINITY))
        .collect();
    spread(&ds)
}

/// Largest `|D_f(p_i, y) - D_f(p_0, y)|` and largest `D_f(p_i, y)`.
pub(crate) fn forward_gap(f: &LegendreFunction, points: &[Vector], y: &Vector) -> (f64, f64) {
    let ds: Vec<f64> = points
        .iter()
        .map(|p| bregman_distance(f, p, y).unwrap_or(f64::INFINITY))
        .collect();
    spread(&ds)
}

fn spread(ds: &[f64]) -> (f64, f64) {
    let d0 = ds[0];
    let gap = ds.iter().map(|d| (d - d0).abs()).fold(0.0, f64::max);
    let max = ds.iter().copied().fold(0.0, f64::max);
    if ds.iter().any(|d| !d.is_finite()) {
        (f64::INFINITY, f64::INFINITY)
    } else {
        (gap, max)
    }
}

/// Tolerance on an equidistance gap when the distances are about `max_d`.
pub fn equidistance_tolerance(max_d: f64) -> f64 {
    CC_TOL * (1.0 + max_d)
}

/// A Bregman projection onto a flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub point: Vector,
    /// Norm of the reduced optimality residual at `point`.
    pub residual: f64,
    pub iterations: usize,
}

/// Which argument of `D_f` is varied: the first (backward) or the second
/// (forward).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Backward,
    Forward,
}

/// Backward projection: the minimizer of `D_f(., y)` over `flat`,
/// characterized by `grad f(y) - grad f(z)` orthogonal to the flat.
///
/// Solved by damped Newton on orthonormal flat coordinates, starting from
/// the Euclidean projection of `y` (pulled toward the flat's base point
/// until interior).
pub fn backward_bregman_project(
    f: &LegendreFunction,
    flat: &AffineFlat,
    y: &Vector,
) -> Result<ProjectionResult> {
    project(f, flat, y, Mode::Backward)
}

/// Forward projection: the minimizer of `D_f(y, .)` over `flat`,
/// characterized by `hess f(z) (y - z)` orthogonal to the flat.
pub fn forward_bregman_project(
    f: &LegendreFunction,
    flat: &AffineFlat,
    y: &Vector,
) -> Result<ProjectionResult> {
    if !f.capabilities().allows_forward_projections {
        return Err(Error::Unsupported {
            function: f.name().to_owned(),
            capability: "forward Bregman projections",
        });
    }
    project(f, flat, y, Mode::Forward)
}

fn project(f: &LegendreFunction, flat: &AffineFlat, y: &Vector, mode: Mode) -> Result<ProjectionResult> {
    f.require_interior(y)?;
    f.check_dim(&flat.base)?;
    if let Some(d) = flat.directions.iter().find(|d| d.len() != f.dim()) {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: d.len(),
        });
    }

    let q = flat.orthonormal_directions();
    let at = |c: &Vector| &flat.base + &q * c;
    let interior = |x: &Vector| f.membership(x).is_interior();

    let origin = Vector::zeros(q.ncols());
    let start = start_coordinates(&q.transpose() * (y - &flat.base), &origin, |c| {
        interior(&at(c))
    })
        .ok_or_else(|| Error::NoProjection {
            reason: "no interior start point on the flat".into(),
            iterations: 0,
            residual: f64::INFINITY,
        })?;

    let gy = f.gradient_unchecked(y);
    let residual = |c: &Vector| -> Option<Vector> {
        let x = at(c);
        if !interior(&x) {
            return None;
        }
        Some(match mode {
            Mode::Backward => q.transpose() * (f.gradient_unchecked(&x) - &gy),
            Mode::Forward => q.transpose() * (f.hessian_unchecked(&x) * (y - &x)),
        })
    };
    let system = |c: &Vector| -> Option<(Vector, Matrix)> {
        let r = residual(c)?;
        let jac = match mode {
            Mode::Backward => {
                let x = at(c);
                q.transpose() * f.hessian_unchecked(&x) * &q
            }
            Mode::Forward => finite_difference_jacobian(c, &r, &residual),
        };
        Some((r, jac))
    };

    let r0 = residual(&start).map_or(0.0, |r| r.norm());
    let run = damped_newton(start, NEWTON_TOL * (1.0 + r0), system);
    if !run.converged {
        return Err(Error::NoProjection {
            reason: run.reason.into(),
            iterations: run.iterations,
            residual: run.residual,
        });
    }
    Ok(ProjectionResult {
        point: at(&run.x),
        residual: run.residual,
        iterations: run.iterations,
    })
}

/// Starts at `c`, halving the offset from `anchor` until `feasible` holds.
pub(crate) fn start_coordinates(
    c: Vector,
    anchor: &Vector,
    feasible: impl Fn(&Vector) -> bool,
) -> Option<Vector> {
    let mut offset = c - anchor;
    for _ in 0..=MAX_HALVINGS {
        let c = anchor + &offset;
        if feasible(&c) {
            return Some(c);
        }
        offset *= 0.5;
    }
    feasible(anchor).then(|| anchor.clone())
}

/// Central differences, falling back to one-sided differences near the
/// boundary of the feasible region.
fn finite_difference_jacobian(
    c: &Vector,
    r: &Vector,
    residual: &impl Fn(&Vector) -> Option<Vector>,
) -> Matrix {
    let k = c.len();
    let mut jac = Matrix::zeros(r.len(), k);
    for j in 0..k {
        let mut h = 1e-6 * (1.0 + c[j].abs());
        let column = loop {
            let mut plus = c.clone();
            plus[j] += h;
            let mut minus = c.clone();
            minus[j] -= h;
            match (residual(&plus), residual(&minus)) {
                (Some(a), Some(b)) => break (a - b) / (2.0 * h),
                (Some(a), None) => break (a - r) / h,
                (None, Some(b)) => break (r - b) / h,
                (None, None) if h > 1e-14 => h *= 0.5,
                (None, None) => break Vector::zeros(r.len()),
            }
        };
        jac.set_column(j, &column);
    }
    jac
}
