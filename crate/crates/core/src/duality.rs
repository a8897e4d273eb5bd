//! Cross-checks between backward objects under `f` and forward objects
//! under the conjugate `f*`, transported through `grad f` and `grad f*`.

use serde::{Deserialize, Serialize};

use crate::backward::{backward_e_representative, backward_pseudo_circumcenter, BackwardProblem};
use crate::forward::{forward_circumcenter, forward_e_representative, forward_pseudo_circumcenter, ForwardProblem};
use crate::tolerances::DUAL_TOL;
use crate::{Error, LegendreFunction, Membership, Outcome, PointSet, Result, SolutionSet, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualityStatus {
    Match,
    Mismatch,
    /// A hypothesis fails at the computed points; see the witness.
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub lhs: SolutionSet,
    pub rhs: SolutionSet,
    /// Largest coordinate deviation between corresponding points (for set
    /// comparisons, the largest distance of a sampled point to the other
    /// set).
    pub max_deviation: f64,
    pub status: DualityStatus,
    /// Why the status is `Inapplicable`.
    pub witness: Option<String>,
}

/// `grad f(S)`, checked to keep distinct points distinct.
fn gradient_image(f: &LegendreFunction, s: &PointSet) -> Result<PointSet> {
    let image = s.map(|q| f.grad(q))?;
    for i in 0..s.len() {
        for j in 0..i {
            let distinct = s.points()[i] != s.points()[j];
            if distinct && image.points()[i] == image.points()[j] {
                return Err(Error::Invariant(format!(
                    "gradient identifies points {j} and {i}"
                )));
            }
        }
    }
    Ok(image)
}

fn max_abs_diff(a: &Vector, b: &Vector) -> f64 {
    (a - b).amax()
}

/// Compares the backward pseudo-circumcenter of `S` under `f` with
/// `grad f*` of the forward pseudo-circumcenter of `grad f(S)` under `f*`.
///
/// A left-hand point on the boundary of `dom f` makes the comparison
/// inapplicable, since the correspondence only covers `int dom f`. Two empty
/// sides count as a match.
pub fn check_pseudo_duality(f: &LegendreFunction, s: &PointSet) -> Result<DualityReport> {
    let conj = f.conjugate()?;
    let image = gradient_image(f, s)?;
    let lhs = backward_pseudo_circumcenter(&BackwardProblem::new(f.clone(), s.clone())?)?;
    let forward = forward_pseudo_circumcenter(&ForwardProblem::new(conj, image)?)?;
    let rhs = match forward.point() {
        Some(u) => SolutionSet::Unique(f.grad_conj(u)?),
        None => SolutionSet::Empty,
    };

    if let (Some(p), Some(Membership::Boundary)) = (lhs.set.unique(), lhs.membership) {
        let coordinate = f.potential().offending_coordinate(p);
        return Ok(DualityReport {
            witness: Some(match coordinate {
                Some(i) => format!("left-hand point has coordinate {i} = {} on the boundary of dom f", p[i]),
                None => "left-hand point lies on the boundary of dom f".to_owned(),
            }),
            lhs: lhs.set,
            rhs,
            max_deviation: f64::NAN,
            status: DualityStatus::Inapplicable,
        });
    }

    let lhs_point = lhs.point().cloned();
    let (status, max_deviation) = match (&lhs_point, rhs.unique()) {
        (Some(a), Some(b)) => {
            let dev = max_abs_diff(a, b);
            let status = if dev <= DUAL_TOL {
                DualityStatus::Match
            } else {
                DualityStatus::Mismatch
            };
            (status, dev)
        }
        (None, None) => (DualityStatus::Match, 0.0),
        _ => (DualityStatus::Mismatch, f64::INFINITY),
    };
    Ok(DualityReport {
        lhs: lhs.set,
        rhs,
        max_deviation,
        status,
        witness: None,
    })
}

/// Compares equidistance sets across the conjugate pair:
///
/// * the backward set of `S` under `f` against `grad f*` of the forward set
///   of `grad f(S)` under `f*`;
/// * the forward set of `S` under `f` against `grad f*` of the backward set
///   of `grad f(S)` under `f*`.
///
/// Both sides are affine flats; the comparison maps a few sample points of
/// each right-hand side through the gradients and measures their distance
/// to the matching left-hand set.
pub fn check_e_duality(f: &LegendreFunction, s: &PointSet) -> Result<DualityReport> {
    let conj = f.conjugate()?;
    let image = gradient_image(f, s)?;

    // Backward under f vs forward under f*. The forward set under f* lives in
    // its dual variable, which is already a point of dom f; the round trip
    // grad f* o grad f is applied to interior samples.
    let lhs = backward_e_representative(&BackwardProblem::new(f.clone(), s.clone())?)?;
    let rhs = forward_e_representative(&ForwardProblem::new(conj.clone(), image.clone())?)?.dual;
    let first = compare_sets(&lhs, &rhs, |w| {
        if f.membership(w).is_interior() {
            f.grad_conj(&f.gradient_unchecked(w)).ok()
        } else {
            Some(w.clone())
        }
    });

    // Forward under f (dual variable in dom f*) vs backward under f*.
    let lhs2 = forward_e_representative(&ForwardProblem::new(f.clone(), s.clone())?)?.dual;
    let rhs2 = backward_e_representative(&BackwardProblem::new(conj.clone(), image)?)?;
    let second = compare_sets(&lhs2, &rhs2, |x| {
        if conj.membership(x).is_interior() {
            conj.grad_conj(&conj.gradient_unchecked(x)).ok()
        } else {
            Some(x.clone())
        }
    });

    let (status, max_deviation) = match (first, second) {
        (Some(a), Some(b)) => {
            let dev = a.max(b);
            if dev <= DUAL_TOL {
                (DualityStatus::Match, dev)
            } else {
                (DualityStatus::Mismatch, dev)
            }
        }
        _ => (DualityStatus::Mismatch, f64::INFINITY),
    };
    Ok(DualityReport {
        lhs,
        rhs,
        max_deviation,
        status,
        witness: None,
    })
}

/// Largest distance from mapped samples of `rhs` to `lhs`, or `None` when
/// the sets have different shapes. Two empty sets compare equal.
fn compare_sets(lhs: &SolutionSet, rhs: &SolutionSet, map: impl Fn(&Vector) -> Option<Vector>) -> Option<f64> {
    match (lhs, rhs) {
        (SolutionSet::Empty, SolutionSet::Empty) => return Some(0.0),
        (SolutionSet::Empty, _) | (_, SolutionSet::Empty) => return None,
        _ => {}
    }
    if lhs.null_basis().len() != rhs.null_basis().len() {
        return None;
    }
    let mut dev: f64 = 0.0;
    for sample in set_samples(rhs).into_iter().chain(set_samples(lhs)) {
        let mapped = map(&sample)?;
        dev = dev.max(lhs.distance_to(&mapped)).max(rhs.distance_to(&mapped));
    }
    Some(dev)
}

/// The particular point and its offsets by `±1/4` along each basis vector.
fn set_samples(set: &SolutionSet) -> Vec<Vector> {
    let Some(p) = set.representative() else {
        return Vec::new();
    };
    let mut out = vec![p.clone()];
    for b in set.null_basis() {
        out.push(p + b * 0.25);
        out.push(p - b * 0.25);
    }
    out
}

/// The two operators defined through the conjugate:
///
/// * `grad f*` of the forward circumcenter of `grad f(S)` under `f*`;
/// * the backward pseudo-circumcenter of `grad f(S)` under `f*`, which lives
///   in `dom f*`.
pub fn alternative_operators(f: &LegendreFunction, s: &PointSet, seed: u64) -> Result<(Outcome, Outcome)> {
    let conj = f.conjugate()?;
    let image = gradient_image(f, s)?;

    let forward = forward_circumcenter(&ForwardProblem::new(conj.clone(), image.clone())?, seed)?;
    let first = match forward.point() {
        Some(u) => {
            let x = f.grad_conj(u)?;
            Outcome {
                membership: Some(f.membership(&x)),
                set: SolutionSet::Unique(x),
                gap: forward.gap,
                notes: forward.notes,
            }
        }
        None => forward,
    };
    let second = backward_pseudo_circumcenter(&BackwardProblem::new(conj, image)?)?;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bregman::backward_gap;
    use crate::linalg::classical_circumcenter;
    use crate::{Catalog, Potential};
    use approx::assert_relative_eq;

    fn set(pts: Vec<Vec<f64>>) -> PointSet {
        PointSet::new(pts).unwrap()
    }

    fn triangle() -> PointSet {
        set(vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]])
    }

    #[test]
    fn pseudo_duality_negative_entropy_is_inapplicable() {
        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 3);
        let r = check_pseudo_duality(&f, &triangle()).unwrap();
        assert_eq!(r.status, DualityStatus::Inapplicable);
        assert!(r.witness.unwrap().contains("coordinate 0"));
        let l = 1.0 / 2f64.ln();
        assert_relative_eq!(r.lhs.unique().unwrap(), &Vector::from_column_slice(&[0.0, l, l]), epsilon = 1e-12);
    }

    #[test]
    fn pseudo_duality_energy_matches() {
        let f = LegendreFunction::catalog(Catalog::Energy, 3);
        let r = check_pseudo_duality(&f, &triangle()).unwrap();
        assert_eq!(r.status, DualityStatus::Match);
        assert!(r.max_deviation <= 1e-10);
    }

    #[test]
    fn pseudo_duality_burg_matches() {
        let f = LegendreFunction::catalog(Catalog::BurgEntropy, 3);
        let s = set(vec![vec![1.0, 2.0, 1.0], vec![0.5, 1.5, 0.5], vec![1.5, 1.0, 1.5]]);
        let r = check_pseudo_duality(&f, &s).unwrap();
        assert_eq!(r.status, DualityStatus::Match, "{r:?}");
        assert!(r.max_deviation <= 1e-6);
        assert_relative_eq!(
            r.lhs.unique().unwrap(),
            &Vector::from_column_slice(&[0.7709568504557097, 0.7923763959615127, 0.7709568504557097]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn pseudo_duality_burg_both_sides_empty() {
        // the solution on aff grad f(S) leaves the positive orthant, and the
        // dual side leaves int dom f* at the same point
        let f = LegendreFunction::catalog(Catalog::BurgEntropy, 3);
        let s = set(vec![vec![1.0, 2.0, 1.0], vec![0.5, 1.5, 0.5], vec![1.5, 2.5, 1.5]]);
        let r = check_pseudo_duality(&f, &s).unwrap();
        assert!(r.rhs.is_empty());
        assert_eq!(r.status, DualityStatus::Match);
    }

    #[test]
    fn e_duality_examples() {
        let f = LegendreFunction::catalog(Catalog::Energy, 3);
        let r = check_e_duality(&f, &triangle()).unwrap();
        assert_eq!(r.status, DualityStatus::Match);
        assert!(r.max_deviation <= 1e-12);

        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 2);
        let r = check_e_duality(&f, &set(vec![vec![1.0, 1.0], vec![2.0, 1.0]])).unwrap();
        assert_eq!(r.status, DualityStatus::Match);
        assert!(r.max_deviation <= 1e-9);

        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 1);
        let r = check_e_duality(&f, &set(vec![vec![1.0], vec![2.0], vec![3.0]])).unwrap();
        assert!(r.lhs.is_empty() && r.rhs.is_empty());
        assert_eq!(r.status, DualityStatus::Match);
    }

    #[test]
    fn alternative_operators_energy_are_classical() {
        let f = LegendreFunction::catalog(Catalog::Energy, 3);
        let (a, b) = alternative_operators(&f, &triangle(), 1).unwrap();
        let c = classical_circumcenter(&triangle()).unwrap();
        assert_relative_eq!(a.point().unwrap(), c.unique().unwrap(), epsilon = 1e-10);
        assert_relative_eq!(b.point().unwrap(), c.unique().unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn alternative_operators_negative_entropy() {
        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 3);
        let (_, b) = alternative_operators(&f, &triangle(), 1).unwrap();
        let conj = f.conjugate().unwrap();
        let image = triangle().map(|q| f.grad(q)).unwrap();
        let p = b.point().unwrap();
        let (gap, max_d) = backward_gap(&conj, image.points(), p);
        assert!(gap <= 1e-8 * (1.0 + max_d));
    }

    #[test]
    fn alternative_operators_singleton() {
        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 2);
        let s = set(vec![vec![2.0, 3.0]]);
        let (a, b) = alternative_operators(&f, &s, 1).unwrap();
        assert_relative_eq!(a.point().unwrap(), s.first(), epsilon = 1e-14);
        assert_relative_eq!(b.point().unwrap(), s.first(), epsilon = 1e-14);
    }

    #[test]
    fn missing_conjugate_is_unsupported() {
        #[derive(Debug)]
        struct NoConjugate;
        impl Potential for NoConjugate {
            fn name(&self) -> &str {
                "no_conjugate"
            }
            fn capabilities(&self) -> crate::Capabilities {
                Potential::capabilities(&Catalog::Energy)
            }
            fn membership(&self, x: &Vector) -> Membership {
                Catalog::Energy.membership(x)
            }
            fn conjugate_membership(&self, y: &Vector) -> Membership {
                Catalog::Energy.conjugate_membership(y)
            }
            fn value(&self, x: &Vector) -> f64 {
                Catalog::Energy.value(x)
            }
            fn gradient(&self, x: &Vector) -> Vector {
                x.clone()
            }
            fn hessian(&self, x: &Vector) -> crate::Matrix {
                crate::Matrix::identity(x.len(), x.len())
            }
            fn conjugate_gradient(&self, y: &Vector) -> Vector {
                y.clone()
            }
        }
        let f = LegendreFunction::custom(std::sync::Arc::new(NoConjugate), 3);
        assert!(matches!(check_pseudo_duality(&f, &triangle()), Err(Error::Unsupported { .. })));
    }
}
