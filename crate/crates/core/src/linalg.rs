//! Small dense linear algebra: point sets, affine flats, Gram matrices,
//! Euclidean projection, and the constrained linear solver every
//! circumcenter reduces to.

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::tolerances::{EMPTY_RESIDUAL_REL, RANK_TOL};
use crate::{Error, Matrix, Result, Vector};

/// An ordered, nonempty, finite set of points of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vector>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_vectors(points.into_iter().map(Vector::from_vec).collect())
    }

    pub fn from_vectors(points: Vec<Vector>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput("point set"))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidInput("points must have positive dimension".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coordinate in {p:?}")));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn first(&self) -> &Vector {
        &self.points[0]
    }

    /// `p_i - p_0` for `i = 1..m`.
    pub fn differences(&self) -> Vec<Vector> {
        self.points[1..].iter().map(|p| p - &self.points[0]).collect()
    }

    pub fn centroid(&self) -> Vector {
        let sum = self
            .points
            .iter()
            .fold(Vector::zeros(self.dim()), |acc, p| acc + p);
        sum / self.len() as f64
    }

    /// `aff S` with base `p_0` and directions `p_i - p_0`.
    pub fn affine_hull(&self) -> AffineFlat {
        AffineFlat {
            base: self.points[0].clone(),
            directions: self.differences(),
        }
    }

    pub fn map<F>(&self, f: F) -> Result<PointSet>
    where
        F: FnMut(&Vector) -> Result<Vector>,
    {
        PointSet::from_vectors(self.points.iter().map(f).collect::<Result<Vec<_>>>()?)
    }
}

/// `{ base + sum_j c_j d_j }`. The directions may be rank-deficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFlat {
    pub base: Vector,
    pub directions: Vec<Vector>,
}

impl AffineFlat {
    pub fn new(base: Vector, directions: Vec<Vector>) -> Result<Self> {
        for d in &directions {
            if d.len() != base.len() {
                return Err(Error::DimensionMismatch {
                    expected: base.len(),
                    found: d.len(),
                });
            }
        }
        Ok(Self { base, directions })
    }

    pub fn point(base: Vector) -> Self {
        Self {
            base,
            directions: Vec::new(),
        }
    }

    /// All of `R^n`, with the origin as base and the standard basis.
    pub fn whole_space(n: usize) -> Self {
        Self {
            base: Vector::zeros(n),
            directions: (0..n).map(|i| Vector::from_fn(n, |j, _| f64::from(i == j))).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// `n x k` matrix whose columns are the directions.
    pub fn direction_matrix(&self) -> Matrix {
        if self.directions.is_empty() {
            Matrix::zeros(self.ambient_dim(), 0)
        } else {
            Matrix::from_columns(&self.directions)
        }
    }

    pub fn rank(&self) -> usize {
        self.orthonormal_directions().ncols()
    }

    /// Orthonormal basis of the direction space, as columns.
    pub fn orthonormal_directions(&self) -> Matrix {
        orthonormal_columns(&self.direction_matrix(), RANK_TOL)
    }

    pub fn at(&self, coords: &Vector) -> Vector {
        &self.base + self.direction_matrix() * coords
    }
}

/// Classification of the solution set of a linear system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionSet {
    Empty,
    Unique(Vector),
    /// `point + span(null_basis)`, with an orthonormal `null_basis`.
    Flat {
        point: Vector,
        null_basis: Vec<Vector>,
    },
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, SolutionSet::Empty)
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, SolutionSet::Unique(_))
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, SolutionSet::Flat { .. })
    }

    /// The unique point, or the particular point of a flat.
    pub fn representative(&self) -> Option<&Vector> {
        match self {
            SolutionSet::Empty => None,
            SolutionSet::Unique(p) | SolutionSet::Flat { point: p, .. } => Some(p),
        }
    }

    pub fn unique(&self) -> Option<&Vector> {
        match self {
            SolutionSet::Unique(p) => Some(p),
            _ => None,
        }
    }

    pub fn null_basis(&self) -> &[Vector] {
        match self {
            SolutionSet::Flat { null_basis, .. } => null_basis,
            _ => &[],
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SolutionSet::Empty => "empty",
            SolutionSet::Unique(_) => "unique",
            SolutionSet::Flat { .. } => "flat",
        }
    }

    /// Euclidean distance from `x` to the set (infinite when empty).
    pub fn distance_to(&self, x: &Vector) -> f64 {
        match self {
            SolutionSet::Empty => f64::INFINITY,
            SolutionSet::Unique(p) => (x - p).norm(),
            SolutionSet::Flat { point, null_basis } => {
                let d = x - point;
                let proj = null_basis
                    .iter()
                    .fold(Vector::zeros(d.len()), |acc, b| acc + b * b.dot(&d));
                (d - proj).norm()
            }
        }
    }
}

/// Matrix of pairwise inner products.
pub fn gram(vectors: &[Vector]) -> Result<Matrix> {
    let first = vectors.first().ok_or(Error::EmptyInput("gram vectors"))?;
    if let Some(bad) = vectors.iter().find(|v| v.len() != first.len()) {
        return Err(Error::DimensionMismatch {
            expected: first.len(),
            found: bad.len(),
        });
    }
    let m = vectors.len();
    Ok(Matrix::from_fn(m, m, |i, j| vectors[i].dot(&vectors[j])))
}

/// Number of singular values strictly above `rank_tol * sigma_max`.
pub fn numerical_rank(a: &Matrix, rank_tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.singular_values();
    let smax = sv.max();
    if smax <= 0.0 || !smax.is_finite() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// Whether `p_i - p_0` are linearly independent, decided by a relative
/// singular-value threshold. A single point is affinely independent.
pub fn affinely_independent(points: &[Vector], rank_tol: f64) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p - &points[0]).collect();
    if diffs.len() > points[0].len() {
        return false;
    }
    numerical_rank(&Matrix::from_columns(&diffs), rank_tol) == diffs.len()
}

/// Orthonormal basis (as columns) for the column space of `a`.
pub(crate) fn orthonormal_columns(a: &Matrix, rank_tol: f64) -> Matrix {
    let n = a.nrows();
    if a.ncols() == 0 || n == 0 {
        return Matrix::zeros(n, 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    if smax <= 0.0 || !smax.is_finite() {
        return Matrix::zeros(n, 0);
    }
    let keep: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rank_tol * smax)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if keep.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&keep)
    }
}

/// Minimal-norm least-squares solution of `k c = b` together with an
/// orthonormal kernel basis of `k`, via SVD.
pub(crate) struct LeastSquares {
    pub solution: Vector,
    pub kernel: Vec<Vector>,
    pub residual: f64,
}

pub(crate) fn least_squares(k: &Matrix, b: &Vector) -> LeastSquares {
    let (p, cols) = k.shape();
    if cols == 0 {
        return LeastSquares {
            solution: Vector::zeros(0),
            kernel: Vec::new(),
            residual: b.norm(),
        };
    }
    // Zero rows leave the solution unchanged and make the SVD return a full
    // right factor, whose trailing rows span the kernel.
    let rows = p.max(cols);
    let mut padded = Matrix::zeros(rows, cols);
    padded.view_mut((0, 0), (p, cols)).copy_from(k);
    let mut rhs = Vector::zeros(rows);
    rhs.rows_mut(0, p).copy_from(b);

    let svd = SVD::new(padded, true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.max();
    let cutoff = if smax > 0.0 && smax.is_finite() {
        RANK_TOL * smax
    } else {
        f64::INFINITY
    };

    let mut solution = Vector::zeros(cols);
    let mut kernel = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        let v = v_t.row(i).transpose();
        if s > cutoff {
            let coeff = u.column(i).dot(&rhs) / s;
            solution += v * coeff;
        } else {
            kernel.push(v);
        }
    }
    let residual = if p == 0 { 0.0 } else { (k * &solution - b).norm() };
    LeastSquares {
        solution,
        kernel,
        residual,
    }
}

/// `{ x in flat : <x, normals_i> = rhs_i }`.
///
/// The point is parameterized as `x = base + D c`; the reduced system in
/// `c` is solved by SVD. Inconsistent systems give `Empty`; a nontrivial
/// kernel that survives the map back to ambient space gives `Flat` with the
/// minimal-norm `c` as particular solution.
pub fn solve_affine_constraints(
    flat: &AffineFlat,
    normals: &[Vector],
    rhs: &[f64],
) -> Result<SolutionSet> {
    let n = flat.ambient_dim();
    if normals.len() != rhs.len() {
        return Err(Error::DimensionMismatch {
            expected: normals.len(),
            found: rhs.len(),
        });
    }
    if let Some(bad) = normals
        .iter()
        .chain(flat.directions.iter())
        .find(|v| v.len() != n)
    {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }

    let d = flat.direction_matrix();
    let p = normals.len();
    let n_t = if p == 0 {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_columns(normals).transpose()
    };
    let k = &n_t * &d;
    let b = Vector::from_iterator(
        p,
        normals.iter().zip(rhs).map(|(nv, r)| r - nv.dot(&flat.base)),
    );

    let ls = least_squares(&k, &b);
    if !(ls.residual <= EMPTY_RESIDUAL_REL * (1.0 + b.norm())) {
        return Ok(SolutionSet::Empty);
    }
    let point = &flat.base + &d * &ls.solution;

    if ls.kernel.is_empty() {
        return Ok(SolutionSet::Unique(point));
    }
    let w = Matrix::from_columns(&ls.kernel.iter().map(|v| &d * v).collect::<Vec<_>>());
    let d_scale = if d.ncols() == 0 { 0.0 } else { d.singular_values().max() };
    let null = orthonormal_columns_abs(&w, RANK_TOL * d_scale);
    if null.is_empty() {
        Ok(SolutionSet::Unique(point))
    } else {
        Ok(SolutionSet::Flat {
            point,
            null_basis: null,
        })
    }
}

/// Left singular vectors of `a` with singular value above an absolute cutoff.
fn orthonormal_columns_abs(a: &Matrix, cutoff: f64) -> Vec<Vector> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return Vec::new();
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("u requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cutoff)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Nearest point of `flat` to `x` in the Euclidean norm.
pub fn euclid_project(flat: &AffineFlat, x: &Vector) -> Vector {
    let q = flat.orthonormal_directions();
    let offset = x - &flat.base;
    &flat.base + &q * (q.transpose() * offset)
}

/// Explicit Gram-inverse formula for the unique `p in aff{z_0..z_m}` with
/// `<p, z_i - z_0> = lambda_i`:
///
/// ```text
/// p = z_0 + Z G(Z)^{-1} (lambda - Z^T z_0),   Z = [z_1 - z_0, ..., z_m - z_0]
/// ```
///
/// Requires affinely independent points.
pub fn gram_formula(points: &[Vector], lambdas: &[f64]) -> Result<Vector> {
    let z0 = points.first().ok_or(Error::EmptyInput("gram formula points"))?;
    if lambdas.len() + 1 != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len() - 1,
            found: lambdas.len(),
        });
    }
    if points.len() == 1 {
        return Ok(z0.clone());
    }
    if !affinely_independent(points, RANK_TOL) {
        return Err(Error::InvalidInput(
            "gram formula requires affinely independent points".into(),
        ));
    }
    let diffs: Vec<Vector> = points[1..].iter().map(|z| z - z0).collect();
    let g = gram(&diffs)?;
    let g_inv = g
        .try_inverse()
        .ok_or_else(|| Error::Invariant("gram matrix not invertible".into()))?;
    let rhs = Vector::from_iterator(
        diffs.len(),
        diffs.iter().zip(lambdas).map(|(d, l)| l - z0.dot(d)),
    );
    let alpha = g_inv * rhs;
    Ok(z0 + Matrix::from_columns(&diffs) * alpha)
}

/// Classical (Euclidean) circumcenter: the points of `aff S` equidistant
/// from every point of `S`.
pub fn classical_circumcenter(points: &PointSet) -> Result<SolutionSet> {
    let q0 = points.first();
    let rhs: Vec<f64> = points.points()[1..]
        .iter()
        .map(|q| 0.5 * (q.norm_squared() - q0.norm_squared()))
        .collect();
    solve_affine_constraints(&points.affine_hull(), &points.differences(), &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap(), Matrix::identity(2, 2));
        assert_eq!(gram(&[v(&[1.0, 1.0])]).unwrap(), Matrix::from_element(1, 1, 2.0));
        let l = 2f64.ln();
        let g = gram(&[v(&[0.0, l, 0.0]), v(&[0.0, 0.0, l])]).unwrap();
        assert_eq!(g, Matrix::from_row_slice(2, 2, &[l * l, 0.0, 0.0, l * l]));
        assert_eq!(gram(&[]).unwrap_err(), Error::EmptyInput("gram vectors"));
    }

    #[test]
    fn affine_independence_examples() {
        let collinear = [v(&[1.0, 2.0, 1.0]), v(&[0.5, 1.5, 0.5]), v(&[1.5, 2.5, 1.5])];
        assert!(!affinely_independent(&collinear, RANK_TOL));
        let tri = [v(&[1.0, 1.0, 1.0]), v(&[1.0, 2.0, 1.0]), v(&[1.0, 1.0, 2.0])];
        assert!(affinely_independent(&tri, RANK_TOL));
        assert!(affinely_independent(&[v(&[3.0, 4.0])], RANK_TOL));
        assert!(!affinely_independent(&[v(&[3.0]), v(&[3.0])], RANK_TOL));
    }

    #[test]
    fn solve_classical_system() {
        let s = PointSet::new(vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]]).unwrap();
        let sol = solve_affine_constraints(
            &s.affine_hull(),
            &[v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])],
            &[1.5, 1.5],
        )
        .unwrap();
        let p = sol.unique().expect("unique");
        assert_relative_eq!(p, &v(&[1.0, 1.5, 1.5]), epsilon = 1e-14);
    }

    #[test]
    fn solve_without_constraints_is_the_flat() {
        let sol = solve_affine_constraints(&AffineFlat::whole_space(2), &[], &[]).unwrap();
        match sol {
            SolutionSet::Flat { point, null_basis } => {
                assert_eq!(point, v(&[0.0, 0.0]));
                assert_eq!(null_basis.len(), 2);
                let b = Matrix::from_columns(&null_basis);
                assert_relative_eq!(b.transpose() * b, Matrix::identity(2, 2), epsilon = 1e-14);
            }
            other => panic!("expected flat, got {other:?}"),
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let line = AffineFlat::new(v(&[0.0, 0.0]), vec![v(&[1.0, 0.0])]).unwrap();
        let sol = solve_affine_constraints(&line, &[v(&[0.0, 1.0])], &[1.0]).unwrap();
        assert!(sol.is_empty());
    }

    #[test]
    fn solve_point_flat() {
        let pt = AffineFlat::point(v(&[1.0, 2.0]));
        assert_eq!(
            solve_affine_constraints(&pt, &[v(&[1.0, 1.0])], &[3.0]).unwrap(),
            SolutionSet::Unique(v(&[1.0, 2.0]))
        );
        assert!(solve_affine_constraints(&pt, &[v(&[1.0, 1.0])], &[4.0]).unwrap().is_empty());
    }

    #[test]
    fn solve_with_redundant_directions_is_unique_in_ambient_space() {
        let flat = AffineFlat::new(v(&[0.0, 0.0]), vec![v(&[1.0, 1.0]), v(&[2.0, 2.0])]).unwrap();
        let sol = solve_affine_constraints(&flat, &[v(&[1.0, 0.0])], &[3.0]).unwrap();
        assert_relative_eq!(sol.unique().unwrap(), &v(&[3.0, 3.0]), epsilon = 1e-12);
    }

    #[test]
    fn solve_rejects_mismatched_inputs() {
        let flat = AffineFlat::whole_space(2);
        assert!(matches!(
            solve_affine_constraints(&flat, &[v(&[1.0, 0.0])], &[]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            solve_affine_constraints(&flat, &[v(&[1.0, 0.0, 0.0])], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let axis = AffineFlat::new(v(&[0.0, 0.0]), vec![v(&[1.0, 0.0])]).unwrap();
        assert_relative_eq!(euclid_project(&axis, &v(&[3.0, 4.0])), v(&[3.0, 0.0]));
        let plane = AffineFlat::new(v(&[1.0, 0.0, 0.0]), vec![v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])]).unwrap();
        assert_relative_eq!(
            euclid_project(&plane, &v(&[0.0, 2.0, 3.0])),
            v(&[1.0, 2.0, 3.0]),
            epsilon = 1e-14
        );
    }

    #[test]
    fn gram_formula_matches_classical_circumcenter() {
        let pts = [v(&[0.0, 0.0]), v(&[2.0, 0.0]), v(&[0.0, 2.0])];
        let lambdas: Vec<f64> = pts[1..]
            .iter()
            .map(|q| 0.5 * (q.norm_squared() - pts[0].norm_squared()))
            .collect();
        assert_relative_eq!(gram_formula(&pts, &lambdas).unwrap(), v(&[1.0, 1.0]), epsilon = 1e-14);
        assert_eq!(gram_formula(&pts[..1], &[]).unwrap(), pts[0]);
        assert!(gram_formula(&[v(&[1.0]), v(&[2.0]), v(&[3.0])], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn classical_circumcenter_of_collinear_points_is_empty() {
        let s = PointSet::new(vec![vec![1.0, 2.0, 1.0], vec![0.5, 1.5, 0.5], vec![1.5, 2.5, 1.5]]).unwrap();
        assert!(classical_circumcenter(&s).unwrap().is_empty());
    }

    #[test]
    fn point_set_validation() {
        assert_eq!(PointSet::new(vec![]).unwrap_err(), Error::EmptyInput("point set"));
        assert!(matches!(
            PointSet::new(vec![vec![1.0], vec![1.0, 2.0]]),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
        assert!(PointSet::new(vec![vec![f64::NAN]]).is_err());
    }
}
