//! Forward circumcenters: points equidistant from `S` in the second
//! argument of `D_f`.
//!
//! `D_f(p_i, y) = D_f(p_0, y)` reads `<grad f(y), p_i - p_0> = eta_i`,
//! linear in the dual variable `w = grad f(y)`. Restricting `y` to `aff S`
//! makes the system nonlinear, which is solved by damped Newton with
//! restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::backward::interior_candidate;
use crate::bregman::{equidistance_tolerance, forward_gap, start_coordinates};
use crate::linalg::{affinely_independent, euclid_project, gram, gram_formula, least_squares, solve_affine_constraints};
use crate::newton::damped_newton;
use crate::numeric::compensated_sum;
use crate::tolerances::{FORWARD_RESTARTS, NEWTON_TOL, RANK_TOL};
use crate::{AffineFlat, Error, LegendreFunction, Matrix, Note, Outcome, PointSet, Result, SolutionSet, Vector};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A point set in `dom f` together with its forward equidistance
/// constraints.
#[derive(Debug, Clone)]
pub struct ForwardProblem {
    f: LegendreFunction,
    points: PointSet,
    etas: Vec<f64>,
}

impl ForwardProblem {
    pub fn new(f: LegendreFunction, points: PointSet) -> Result<Self> {
        for p in points.points() {
            f.check_dim(p)?;
            if !f.membership(p).in_domain() {
                return Err(Error::Domain {
                    function: f.name().to_owned(),
                    coordinate: f.potential().offending_coordinate(p),
                    value: f.potential().offending_coordinate(p).map_or(f64::NAN, |i| p[i]),
                });
            }
        }
        let f0 = f.value_unchecked(points.first());
        let etas = points.points()[1..]
            .iter()
            .map(|p| compensated_sum([f.value_unchecked(p), -f0]))
            .collect();
        Ok(Self { f, points, etas })
    }

    pub fn function(&self) -> &LegendreFunction {
        &self.f
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    /// `f(p_i) - f(p_0)` for `i >= 1`.
    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    /// Constraint normals `p_i - p_0`.
    pub fn normals(&self) -> Vec<Vector> {
        self.points.differences()
    }

    /// Residual `<grad f(p), p_i - p_0> - eta_i` and Jacobian
    /// `<hess f(p) d_j, d_i>` at `p = p_0 + sum_j alpha_j d_j`, or `None`
    /// when `p` is not interior.
    pub fn circumcenter_system(&self, alpha: &Vector) -> Option<(Vector, Matrix)> {
        let d = self.points.affine_hull().direction_matrix();
        let p = self.points.first() + &d * alpha;
        if !self.f.membership(&p).is_interior() {
            return None;
        }
        let g = self.f.gradient_unchecked(&p);
        let eta = Vector::from_column_slice(&self.etas);
        let residual = d.transpose() * g - eta;
        let jac = d.transpose() * self.f.hessian_unchecked(&p) * &d;
        Some((residual, jac))
    }

    fn outcome(&self, set: SolutionSet, mut notes: Vec<Note>) -> Outcome {
        let membership = set.representative().map(|p| self.f.membership(p));
        let mut gap = None;
        if let (Some(p), Some(m)) = (set.representative(), membership) {
            if m.is_interior() {
                let (g, max_d) = forward_gap(&self.f, self.points.points(), p);
                gap = Some(g);
                let tolerance = equidistance_tolerance(max_d);
                if !(g <= tolerance) {
                    notes.push(Note::VerificationFailed { gap: g, tolerance });
                }
            } else {
                notes.push(Note::OutsideDomain);
            }
        }
        if set.is_flat() {
            notes.push(Note::FlatNotIntersectedWithDomain);
        }
        Outcome {
            set,
            membership,
            gap,
            notes,
        }
    }
}

/// The forward equidistance set, described in the dual variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardESet {
    /// Solutions `w` of `<w, p_i - p_0> = eta_i`. A flat's null basis spans
    /// the orthogonal complement of the directions of `aff S`.
    pub dual: SolutionSet,
    /// `grad f*(w)` for an interior particular `w`, when one was found.
    pub point: Option<Vector>,
    pub notes: Vec<Note>,
}

/// Solves the dual linear system of the forward equidistance set.
///
/// For a flat, the particular point is taken nearest to `grad f` at the
/// centroid of `S` when possible, falling back to the minimal-norm solution.
pub fn forward_e_representative(problem: &ForwardProblem) -> Result<ForwardESet> {
    let f = &problem.f;
    let dual = solve_affine_constraints(
        &AffineFlat::whole_space(problem.points.dim()),
        &problem.normals(),
        &problem.etas,
    )?;
    if dual.is_empty() {
        return Ok(ForwardESet {
            dual,
            point: None,
            notes: Vec::new(),
        });
    }
    let centroid = problem.points.centroid();
    let target = if f.membership(&centroid).is_interior() {
        f.gradient_unchecked(&centroid)
    } else {
        dual.representative().expect("nonempty").clone()
    };
    let w = interior_candidate(&dual, &target, |w| f.conjugate_membership(w).is_interior());
    let (point, notes) = match w {
        Some(w) => (Some(f.conjugate_gradient_unchecked(&w)), Vec::new()),
        None => (None, vec![Note::OutsideConjugateDomain]),
    };
    Ok(ForwardESet { dual, point, notes })
}

/// Forward circumcenter: `p in aff S ∩ int dom f` with
/// `D_f(p_i, p) = D_f(p_0, p)` for all `i`.
///
/// Inconsistency of the dual linear system certifies emptiness. Otherwise
/// damped Newton runs on the affine coordinates from `alpha = 0`, from the
/// Euclidean circumcenter's coordinates, and from random perturbations of
/// the centroid; the first converged run wins. When every run fails the
/// result is empty with [`Note::NumericalNonexistence`].
pub fn forward_circumcenter(problem: &ForwardProblem, seed: u64) -> Result<Outcome> {
    if forward_e_representative(problem)?.dual.is_empty() {
        return Ok(Outcome::empty(Vec::new()));
    }
    let m = problem.points.len() - 1;
    let centroid = Vector::from_element(m, 1.0 / (m as f64 + 1.0));
    let feasible = |a: &Vector| problem.circumcenter_system(a).is_some();
    let tol = NEWTON_TOL * (1.0 + Vector::from_column_slice(&problem.etas).norm());
    let d = problem.points.affine_hull().direction_matrix();

    let mut starts = vec![Vector::zeros(m), euclidean_coordinates(&problem.points)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..FORWARD_RESTARTS {
        starts.push(Vector::from_fn(m, |i, _| centroid[i] + rng.gen_range(-0.5..=0.5)));
    }

    let mut best = f64::INFINITY;
    for start in starts {
        let Some(start) = start_coordinates(start, &centroid, feasible) else {
            continue;
        };
        let run = damped_newton(start, tol, |a| problem.circumcenter_system(a));
        best = best.min(run.residual);
        if run.converged {
            let p = problem.points.first() + &d * &run.x;
            return Ok(problem.outcome(SolutionSet::Unique(p), Vec::new()));
        }
    }
    Ok(Outcome::empty(vec![Note::NumericalNonexistence { best_residual: best }]))
}

/// Affine coordinates of the Euclidean circumcenter (minimal-norm when the
/// points are dependent).
fn euclidean_coordinates(points: &PointSet) -> Vector {
    let diffs = points.differences();
    let m = diffs.len();
    if m == 0 {
        return Vector::zeros(0);
    }
    let g = gram(&diffs).expect("nonempty differences");
    let rhs = Vector::from_fn(m, |i, _| 0.5 * diffs[i].norm_squared());
    least_squares(&g, &rhs).solution
}

/// Forward pseudo-circumcenter: `grad f*(w)` for the unique `w in aff S`
/// with `<w, p_i - p_0> = eta_i`. Empty when no such `w` exists or when it
/// lies outside `int dom f*`.
pub fn forward_pseudo_circumcenter(problem: &ForwardProblem) -> Result<Outcome> {
    let w = if affinely_independent(problem.points.points(), RANK_TOL) {
        SolutionSet::Unique(gram_formula(problem.points.points(), &problem.etas)?)
    } else {
        solve_affine_constraints(&problem.points.affine_hull(), &problem.normals(), &problem.etas)?
    };
    if w.is_flat() {
        return Err(Error::Invariant("forward pseudo-circumcenter solved to a flat".into()));
    }
    Ok(map_dual_point(problem, w.unique()))
}

/// Forward pseudo-circumcenter by the projection route:
/// `grad f*(P_{aff S}(grad f(y)))` for a point `y` of the forward
/// equidistance set. Any dual solution `w = grad f(y)` projects to the same
/// point, so the particular dual solution is used directly.
pub fn forward_pseudo_circumcenter_by_projection(problem: &ForwardProblem) -> Result<Outcome> {
    let e = forward_e_representative(problem)?;
    let w = e
        .dual
        .representative()
        .map(|w| euclid_project(&problem.points.affine_hull(), w));
    Ok(map_dual_point(problem, w.as_ref()))
}

fn map_dual_point(problem: &ForwardProblem, w: Option<&Vector>) -> Outcome {
    match w {
        None => Outcome::empty(Vec::new()),
        Some(w) if !problem.f.conjugate_membership(w).is_interior() => {
            Outcome::empty(vec![Note::OutsideConjugateDomain])
        }
        Some(w) => {
            let y = problem.f.conjugate_gradient_unchecked(w);
            problem.outcome(SolutionSet::Unique(y), Vec::new())
        }
    }
}
