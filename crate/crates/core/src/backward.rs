//! Backward circumcenters: points equidistant from `S` in the first
//! argument of `D_f`.
//!
//! `D_f(x, q_i) = D_f(x, q_0)` rearranges to the linear constraint
//! `<grad f(q_i) - grad f(q_0), x> = beta_i`, so every operator here is a
//! linear solve on some affine flat.

use crate::bregman::{backward_gap, equidistance_tolerance, forward_bregman_project};
use crate::linalg::{affinely_independent, euclid_project, gram_formula, solve_affine_constraints};
use crate::numeric::{compensated_sum, dot};
use crate::tolerances::{LIN_TOL, RANK_TOL};
use crate::{AffineFlat, Error, LegendreFunction, Note, Outcome, PointSet, Result, SolutionSet, Vector};

/// A point set in `int dom f` together with its equidistance constraints.
#[derive(Debug, Clone)]
pub struct BackwardProblem {
    f: LegendreFunction,
    points: PointSet,
    gradients: Vec<Vector>,
    betas: Vec<f64>,
}

impl BackwardProblem {
    pub fn new(f: LegendreFunction, points: PointSet) -> Result<Self> {
        for q in points.points() {
            f.require_interior(q)?;
        }
        let gradients: Vec<Vector> = points.points().iter().map(|q| f.gradient_unchecked(q)).collect();
        // <grad f(q), q> - f(q), relative to q_0
        let offset_terms = |i: usize| {
            let (q, g) = (&points.points()[i], &gradients[i]);
            g.iter()
                .zip(q.iter())
                .map(|(a, b)| a * b)
                .chain(std::iter::once(-f.value_unchecked(q)))
                .collect::<Vec<_>>()
        };
        let base = offset_terms(0);
        let betas = (1..points.len())
            .map(|i| compensated_sum(offset_terms(i).into_iter().chain(base.iter().map(|t| -t))))
            .collect();
        Ok(Self {
            f,
            points,
            gradients,
            betas,
        })
    }

    pub fn function(&self) -> &LegendreFunction {
        &self.f
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    /// `grad f(q_i)` for every point.
    pub fn gradients(&self) -> &[Vector] {
        &self.gradients
    }

    /// Right-hand sides of the equidistance constraints, one per `q_i`,
    /// `i >= 1`.
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Constraint normals `grad f(q_i) - grad f(q_0)`.
    pub fn normals(&self) -> Vec<Vector> {
        self.gradients[1..].iter().map(|g| g - &self.gradients[0]).collect()
    }

    /// The linear span of the constraint normals, as a flat through the
    /// origin.
    pub fn normal_span(&self) -> AffineFlat {
        AffineFlat {
            base: Vector::zeros(self.points.dim()),
            directions: self.normals(),
        }
    }

    /// `aff grad f(S)`.
    pub fn gradient_hull(&self) -> AffineFlat {
        AffineFlat {
            base: self.gradients[0].clone(),
            directions: self.normals(),
        }
    }

    /// Largest scaled violation of the equidistance constraints at `x`.
    pub fn constraint_residual(&self, x: &Vector) -> f64 {
        self.normals()
            .iter()
            .zip(&self.betas)
            .map(|(n, b)| (dot(n, x) - b).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max)
    }

    fn outcome(&self, set: SolutionSet, mut notes: Vec<Note>) -> Outcome {
        let membership = set.representative().map(|p| self.f.membership(p));
        let mut gap = None;
        if let (Some(p), Some(m)) = (set.representative(), membership) {
            if m.in_domain() {
                let (g, max_d) = backward_gap(&self.f, self.points.points(), p);
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

/// The backward equidistance set, unrestricted: all `x` with
/// `<grad f(q_i) - grad f(q_0), x> = beta_i`.
///
/// A flat is returned with its minimal-norm particular point; its domain
/// status is not part of the answer.
pub fn backward_e_representative(problem: &BackwardProblem) -> Result<SolutionSet> {
    solve_affine_constraints(
        &AffineFlat::whole_space(problem.points.dim()),
        &problem.normals(),
        &problem.betas,
    )
}

/// A point of the backward equidistance set inside `int dom f`, if one is
/// easy to find: the set's own point when unique, otherwise the nearest
/// point of the set to the centroid of `S`, then the minimal-norm point.
pub fn backward_e_interior_point(problem: &BackwardProblem) -> Result<Option<Vector>> {
    let set = backward_e_representative(problem)?;
    Ok(interior_candidate(&set, &problem.points.centroid(), |x| {
        problem.f.membership(x).is_interior()
    }))
}

pub(crate) fn interior_candidate(
    set: &SolutionSet,
    target: &Vector,
    interior: impl Fn(&Vector) -> bool,
) -> Option<Vector> {
    match set {
        SolutionSet::Empty => None,
        SolutionSet::Unique(p) => interior(p).then(|| p.clone()),
        SolutionSet::Flat { point, null_basis } => {
            let offset = target - point;
            let nearest = null_basis
                .iter()
                .fold(point.clone(), |acc, b| acc + b * b.dot(&offset));
            [nearest, point.clone()].into_iter().find(|x| interior(x))
        }
    }
}

/// Backward circumcenter: the equidistance set intersected with `aff S`.
pub fn backward_circumcenter(problem: &BackwardProblem) -> Result<Outcome> {
    let set = solve_affine_constraints(&problem.points.affine_hull(), &problem.normals(), &problem.betas)?;
    Ok(problem.outcome(set, Vec::new()))
}

/// Backward pseudo-circumcenter: the equidistance set intersected with
/// `aff grad f(S)`. Always empty or a single point.
///
/// Uses the explicit Gram-inverse formula when the gradients are affinely
/// independent and the general constrained solver otherwise.
pub fn backward_pseudo_circumcenter(problem: &BackwardProblem) -> Result<Outcome> {
    let set = if affinely_independent(&problem.gradients, RANK_TOL) {
        SolutionSet::Unique(gram_formula(&problem.gradients, &problem.betas)?)
    } else {
        solve_affine_constraints(&problem.gradient_hull(), &problem.normals(), &problem.betas)?
    };
    if set.is_flat() {
        return Err(Error::Invariant(
            "backward pseudo-circumcenter solved to a flat".into(),
        ));
    }
    Ok(problem.outcome(set, Vec::new()))
}

/// Backward pseudo-circumcenter by the projection route: the Euclidean
/// projection of any equidistance point onto `aff grad f(S)`.
///
/// The equidistance set is a translate of the orthogonal complement of the
/// gradient differences, so every point of it projects to the same place.
pub fn backward_pseudo_circumcenter_by_projection(problem: &BackwardProblem) -> Result<Outcome> {
    let set = match backward_e_representative(problem)? {
        SolutionSet::Empty => SolutionSet::Empty,
        e => {
            let x = e.representative().expect("nonempty");
            SolutionSet::Unique(euclid_project(&problem.gradient_hull(), x))
        }
    };
    Ok(problem.outcome(set, Vec::new()))
}

/// Backward circumcenter as the forward Bregman projection of an interior
/// equidistance point onto `aff S`.
///
/// The result is checked for equidistance afterwards and carries a
/// [`Note::VerificationFailed`] when the check fails.
pub fn backward_cc_via_forward_projection(problem: &BackwardProblem, e_point: &Vector) -> Result<Outcome> {
    let f = &problem.f;
    if !f.capabilities().allows_forward_projections {
        return Err(Error::Unsupported {
            function: f.name().to_owned(),
            capability: "forward Bregman projections",
        });
    }
    f.require_interior(e_point)?;
    let residual = problem.constraint_residual(e_point);
    if !(residual <= LIN_TOL.sqrt()) {
        return Err(Error::InvalidInput(format!(
            "point is not in the equidistance set (residual {residual:e})"
        )));
    }
    let projected = forward_bregman_project(f, &problem.points.affine_hull(), e_point)?;
    Ok(problem.outcome(SolutionSet::Unique(projected.point), Vec::new()))
}
