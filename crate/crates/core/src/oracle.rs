//! Brute-force checks that share no code with the solvers: distances are
//! evaluated straight from the definition, circumcenters are located by
//! grid search, and scalar equations by bisection.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bregman::Mode;
use crate::{AffineFlat, LegendreFunction, PointSet, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GridSearch,
    ScalarRootFind,
    ConstraintResidual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub method: Method,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub reason: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `f(x) - f(y) - <grad f(y), x - y>` by plain summation; `None` when
/// undefined.
fn definition_distance(f: &LegendreFunction, x: &Vector, y: &Vector) -> Option<f64> {
    let fx = f.eval(x).ok()?;
    let fy = f.eval(y).ok()?;
    let gy = f.grad(y).ok()?;
    if !fx.is_finite() {
        return None;
    }
    let mut inner = 0.0;
    for i in 0..x.len() {
        inner += gy[i] * (x[i] - y[i]);
    }
    Some(fx - fy - inner)
}

/// Distances from the candidate to every point of `s`, in the order the
/// mode prescribes.
fn distances(f: &LegendreFunction, s: &[Vector], c: &Vector, mode: Mode) -> Option<Vec<f64>> {
    s.iter()
        .map(|q| match mode {
            Mode::Backward => definition_distance(f, c, q),
            Mode::Forward => definition_distance(f, q, c),
        })
        .collect()
}

fn max_gap(ds: &[f64]) -> f64 {
    ds.iter().map(|d| (d - ds[0]).abs()).fold(0.0, f64::max)
}

/// Checks `D_f(c, q_i) = D_f(c, q_0)` (backward) or
/// `D_f(q_i, c) = D_f(q_0, c)` (forward) for all `i`, to absolute tolerance
/// `tol`.
pub fn verify_equidistance(
    f: &LegendreFunction,
    s: &PointSet,
    candidate: &Vector,
    mode: Mode,
    tol: f64,
) -> VerificationReport {
    let claim = format!("{mode:?} equidistance under {}", f.name()).to_lowercase();
    let fail = |reason: String| VerificationReport {
        claim: claim.clone(),
        method: Method::ConstraintResidual,
        worst_residual: f64::INFINITY,
        tolerance: tol,
        verdict: Verdict::Fail,
        reason: Some(reason),
    };
    if candidate.len() != s.dim() || f.dim() != s.dim() {
        return fail(format!(
            "dimension mismatch: candidate {}, points {}, function {}",
            candidate.len(),
            s.dim(),
            f.dim()
        ));
    }
    let allowed = match mode {
        Mode::Backward => f.membership(candidate).in_domain(),
        Mode::Forward => f.membership(candidate).is_interior(),
    };
    if !allowed {
        return fail("candidate outside the required domain".into());
    }
    let Some(ds) = distances(f, s.points(), candidate, mode) else {
        return fail("a distance is undefined at the candidate".into());
    };
    let gap = max_gap(&ds);
    VerificationReport {
        claim,
        method: Method::ConstraintResidual,
        worst_residual: gap,
        tolerance: tol,
        verdict: if gap <= tol { Verdict::Pass } else { Verdict::Fail },
        reason: None,
    }
}

const GRID_POINTS: usize = 41;
const GRID_ACCEPT: f64 = 1e-3;

/// Multi-level grid search on `flat` for the point minimizing the largest
/// equidistance gap.
///
/// The grid lives in orthonormal flat coordinates centered at the flat's
/// base, with `41` nodes per axis over `[-grid_radius, grid_radius]`. Each
/// level recenters on the best node and shrinks the radius tenfold.
/// Infeasible nodes are skipped. Returns `None` when the flat has more than
/// three directions or the best gap exceeds `1e-3`.
pub fn grid_refine_search(
    f: &LegendreFunction,
    s: &PointSet,
    flat: &AffineFlat,
    mode: Mode,
    grid_radius: f64,
    levels: usize,
) -> Option<Vector> {
    grid_refine_search_through(f, s, flat, mode, grid_radius, levels, |x| Some(x.clone()))
}

/// [`grid_refine_search`] over the image of `flat` under `map`, for
/// candidate sets that are curved images of flats (such as `grad f*` of an
/// affine hull). Nodes where `map` returns `None` are skipped. Returns the
/// mapped point.
pub fn grid_refine_search_through(
    f: &LegendreFunction,
    s: &PointSet,
    flat: &AffineFlat,
    mode: Mode,
    grid_radius: f64,
    levels: usize,
    map: impl Fn(&Vector) -> Option<Vector> + Sync,
) -> Option<Vector> {
    let q = flat.orthonormal_directions();
    let k = q.ncols();
    if k > 3 {
        return None;
    }
    let at = |c: &Vector| map(&(&flat.base + &q * c));
    let objective = |c: &Vector| at(c).and_then(|x| distances(f, s.points(), &x, mode)).map(|ds| max_gap(&ds));

    let mut center = Vector::zeros(k);
    let mut radius = grid_radius;
    let mut best: Option<(f64, Vector)> = objective(&center).map(|g| (g, center.clone()));
    let nodes = GRID_POINTS.pow(k as u32);
    for _ in 0..levels {
        let node = |idx: usize| {
            let mut c = center.clone();
            let mut rest = idx;
            for j in 0..k {
                let t = (rest % GRID_POINTS) as f64 / (GRID_POINTS - 1) as f64;
                rest /= GRID_POINTS;
                c[j] += radius * (2.0 * t - 1.0);
            }
            c
        };
        let eval = |idx: usize| objective(&node(idx)).map(|g| (g, idx));
        let pick = |a: Option<(f64, usize)>, b: Option<(f64, usize)>| match (a, b) {
            (Some(a), Some(b)) => Some(if (b.0, b.1) < (a.0, a.1) { b } else { a }),
            (a, None) => a,
            (None, b) => b,
        };
        #[cfg(feature = "parallel")]
        let level_best = (0..nodes).into_par_iter().map(eval).reduce(|| None, pick);
        #[cfg(not(feature = "parallel"))]
        let level_best = (0..nodes).map(eval).fold(None, pick);

        if let Some((g, idx)) = level_best {
            if best.as_ref().is_none_or(|(bg, _)| g < *bg) {
                best = Some((g, node(idx)));
            }
        }
        if let Some((_, c)) = &best {
            center = c.clone();
        }
        radius /= 10.0;
    }
    best.filter(|(g, _)| *g <= GRID_ACCEPT).and_then(|(_, c)| at(&c))
}

/// Bisection for `g(t) = 0` on `[lo, hi]`. `None` without a sign change.
pub fn scalar_root_oracle(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut ga, gb) = (g(a), g(b));
    if ga == 0.0 {
        return Some(a);
    }
    if gb == 0.0 {
        return Some(b);
    }
    if !(ga.signum() != gb.signum()) || !ga.is_finite() || !gb.is_finite() {
        return None;
    }
    while (b - a).abs() > tol {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Some(mid);
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Catalog;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn triangle() -> PointSet {
        PointSet::new(vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]]).unwrap()
    }

    #[test]
    fn equidistance_examples() {
        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 3);
        let l = 1.0 / 2f64.ln();
        assert!(verify_equidistance(&f, &triangle(), &v(&[1.0, l, l]), Mode::Backward, 1e-10).passed());
        assert!(verify_equidistance(&f, &triangle(), &v(&[1.0, 4.0 / E, 4.0 / E]), Mode::Forward, 1e-10).passed());
        let r = verify_equidistance(&f, &triangle(), &v(&[1.0, l + 1e-3, l]), Mode::Backward, 1e-10);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.worst_residual > 1e-4);
    }

    #[test]
    fn equidistance_domain_failures() {
        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 3);
        let l = 1.0 / 2f64.ln();
        // backward candidates may sit on the boundary, forward ones may not
        assert!(verify_equidistance(&f, &triangle(), &v(&[0.0, l, l]), Mode::Backward, 1e-10).passed());
        let r = verify_equidistance(&f, &triangle(), &v(&[0.0, l, l]), Mode::Forward, 1e-10);
        assert!(r.reason.is_some());
        let r = verify_equidistance(&f, &triangle(), &v(&[1.0, 1.0]), Mode::Backward, 1e-10);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn grid_search_burg_pseudo_circumcenter() {
        let f = LegendreFunction::catalog(Catalog::BurgEntropy, 3);
        let s = PointSet::new(vec![vec![1.0, 2.0, 1.0], vec![0.5, 1.5, 0.5], vec![1.5, 1.0, 1.5]]).unwrap();
        let flat = s.map(|q| f.grad(q)).unwrap().affine_hull();
        let p = grid_refine_search(&f, &s, &flat, Mode::Backward, 4.0, 5).unwrap();
        assert_relative_eq!(p, v(&[0.7709568504557097, 0.7923763959615127, 0.7709568504557097]), epsilon = 1e-3);
    }

    #[test]
    fn burg_collinear_set_has_no_equidistant_point_in_the_domain() {
        let f = LegendreFunction::catalog(Catalog::BurgEntropy, 3);
        let s = PointSet::new(vec![vec![1.0, 2.0, 1.0], vec![0.5, 1.5, 0.5], vec![1.5, 2.5, 1.5]]).unwrap();
        let flat = s.map(|q| f.grad(q)).unwrap().affine_hull();
        assert!(grid_refine_search(&f, &s, &flat, Mode::Backward, 4.0, 5).is_none());
        let r = verify_equidistance(&f, &s, &v(&[0.7641, 0.8744, 0.7641]), Mode::Backward, 1e-3);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.worst_residual > 0.4);
    }

    #[test]
    fn grid_search_right_triangle() {
        let f = LegendreFunction::catalog(Catalog::Energy, 2);
        let s = PointSet::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let p = grid_refine_search(&f, &s, &s.affine_hull(), Mode::Backward, 4.0, 5).unwrap();
        assert_relative_eq!(p, v(&[1.0, 1.0]), epsilon = 1e-3);
    }

    #[test]
    fn grid_search_finds_nothing_when_empty() {
        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 1);
        let s = PointSet::new(vec![vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        assert!(grid_refine_search(&f, &s, &s.affine_hull(), Mode::Backward, 4.0, 5).is_none());
        assert!(grid_refine_search(&f, &s, &s.affine_hull(), Mode::Forward, 4.0, 5).is_none());
    }

    #[test]
    fn grid_search_through_gradient_map() {
        // forward pseudo-circumcenter: grad f* of a point of aff S
        let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 3);
        let s = triangle();
        let p = grid_refine_search_through(&f, &s, &s.affine_hull(), Mode::Forward, 4.0, 5, |w| f.grad_conj(w).ok())
            .unwrap();
        assert_relative_eq!(p, v(&[E, 4.0 / E, 4.0 / E]), epsilon = 1e-3);
    }

    #[test]
    fn grid_search_rejects_large_flats() {
        let f = LegendreFunction::catalog(Catalog::Energy, 4);
        let s = PointSet::new(vec![vec![0.0; 4]]).unwrap();
        assert!(grid_refine_search(&f, &s, &AffineFlat::whole_space(4), Mode::Backward, 1.0, 1).is_none());
    }

    #[test]
    fn root_oracle_examples() {
        let t = scalar_root_oracle(|t| 2.0 * t.ln() - 4f64.ln(), 1.0, 4.0, 1e-14).unwrap();
        assert_relative_eq!(t, 2.0, epsilon = 1e-12);

        // two-point forward circumcenter of {1, 2}: D(1, y) = D(2, y)
        let d = |x: f64, y: f64| x * (x / y).ln() + y - x;
        let y = scalar_root_oracle(|y| d(1.0, y) - d(2.0, y), 1.0, 2.0, 1e-14).unwrap();
        assert_relative_eq!(y, 4.0 / E, epsilon = 1e-12);
        let closed = ((2.0 * 2f64.ln() - 0.0 + 1.0 - 2.0) / 1.0).exp();
        assert_relative_eq!(closed, 4.0 / E, epsilon = 1e-15);

        assert!(scalar_root_oracle(|t| t.exp() - 100.0, 0.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn projection_example_values_by_bisection() {
        // backward projection of (1, 4) onto the diagonal under negative entropy
        let t = scalar_root_oracle(|t| (t / 1.0).ln() + (t / 4.0).ln(), 1.0, 4.0, 1e-14).unwrap();
        assert_relative_eq!(t, 2.0, epsilon = 1e-12);
        // forward projection: (1 - t) / t + (4 - t) / t = 0
        let t = scalar_root_oracle(|t| (1.0 - t) / t + (4.0 - t) / t, 1.0, 4.0, 1e-14).unwrap();
        assert_relative_eq!(t, 2.5, epsilon = 1e-12);
    }
}
