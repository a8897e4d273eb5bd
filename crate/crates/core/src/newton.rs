//! Damped Newton iteration for small dense square or overdetermined
//! systems whose feasible region is open (a domain interior).

use crate::linalg::least_squares;
use crate::tolerances::{MAX_HALVINGS, NEWTON_MAX_ITER};
use crate::{Matrix, Vector};

/// Armijo constant for the sufficient-decrease test on `|F|`.
const ARMIJO: f64 = 1e-4;

/// Stalling within this factor of the tolerance is treated as the
/// roundoff floor rather than failure.
const FLOOR_FACTOR: f64 = 1e3;

#[derive(Debug, Clone)]
pub(crate) struct NewtonRun {
    pub x: Vector,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub reason: &'static str,
}

/// Runs damped Newton from `start`.
///
/// `system(x)` returns `(F(x), J(x))`, or `None` when `x` is infeasible.
/// Steps use the minimal-norm least-squares solution of `J d = -F`, so
/// rank-deficient and overdetermined Jacobians are handled (Gauss-Newton).
/// Step lengths halve until the iterate is feasible and `|F|` decreases
/// sufficiently.
pub(crate) fn damped_newton<S>(start: Vector, tol: f64, mut system: S) -> NewtonRun
where
    S: FnMut(&Vector) -> Option<(Vector, Matrix)>,
{
    let Some((mut f, mut jac)) = system(&start) else {
        return NewtonRun {
            x: start,
            residual: f64::INFINITY,
            iterations: 0,
            converged: false,
            reason: "start point infeasible",
        };
    };
    let mut x = start;
    let mut residual = f.norm();

    for iter in 0..NEWTON_MAX_ITER {
        if residual <= tol {
            return NewtonRun {
                x,
                residual,
                iterations: iter,
                converged: true,
                reason: "converged",
            };
        }
        let step = least_squares(&jac, &(-&f)).solution;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = &x + &step * t;
            if let Some((ft, jt)) = system(&trial) {
                let rt = ft.norm();
                if rt <= (1.0 - ARMIJO * t) * residual {
                    accepted = Some((trial, ft, jt, rt));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((xn, fn_, jn, rn)) => {
                x = xn;
                f = fn_;
                jac = jn;
                residual = rn;
            }
            None => {
                let converged = residual <= FLOOR_FACTOR * tol;
                return NewtonRun {
                    x,
                    residual,
                    iterations: iter,
                    converged,
                    reason: if converged {
                        "converged to roundoff floor"
                    } else {
                        "line search stalled"
                    },
                };
            }
        }
    }
    let converged = residual <= tol;
    NewtonRun {
        x,
        residual,
        iterations: NEWTON_MAX_ITER,
        converged,
        reason: if converged { "converged" } else { "iteration limit" },
    }
}
