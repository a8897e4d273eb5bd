//! Backward and forward Bregman circumcenters of finite point sets.
//!
//! A Legendre function `f` induces the Bregman distance
//!
//! ```text
//! D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>
//! ```
//!
//! which is asymmetric, so "equidistant from every point of S" has two
//! readings. The backward reading varies the first argument
//! (`D_f(x, q_0) = ... = D_f(x, q_m)`) and turns into a *linear* system in
//! `x`; the forward reading varies the second argument
//! (`D_f(p_0, y) = ... = D_f(p_m, y)`) and is linear in `grad f(y)`.
//!
//! Intersecting those equidistance sets with different affine hulls gives
//! four operators:
//!
//! | operator | hull | solver |
//! |----------|------|--------|
//! | [`backward::backward_circumcenter`] | `aff S` | linear |
//! | [`backward::backward_pseudo_circumcenter`] | `aff grad f(S)` | linear, at most one point |
//! | [`forward::forward_circumcenter`] | `aff S` | damped Newton |
//! | [`forward::forward_pseudo_circumcenter`] | `grad f*(aff S)` | linear, at most one point |
//!
//! [`duality`] cross-checks backward objects under `f` against forward
//! objects under the conjugate `f*`, and [`oracle`] holds brute-force
//! checks that never touch the solver code paths.
//!
//! ```
//! use bregman_cc::{backward, Catalog, LegendreFunction, PointSet};
//!
//! let f = LegendreFunction::catalog(Catalog::NegativeEntropy, 3);
//! let s = PointSet::new(vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]]).unwrap();
//! let problem = backward::BackwardProblem::new(f, s).unwrap();
//! let cc = backward::backward_circumcenter(&problem).unwrap();
//! let p = cc.point().unwrap();
//! assert!((p[1] - 1.0 / 2f64.ln()).abs() < 1e-9);
//! ```

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backward;
pub mod balls;
pub mod bregman;
pub mod duality;
mod error;
pub mod forward;
pub mod legendre;
pub mod linalg;
mod newton;
mod numeric;
pub mod oracle;
mod outcome;
pub mod tolerances;

pub use error::{Error, Result};
pub use legendre::{Capabilities, Catalog, LegendreFunction, Membership, Potential};
pub use linalg::{AffineFlat, PointSet, SolutionSet};
pub use outcome::{Note, Outcome};

/// Dense vector type used throughout the crate.
pub type Vector = nalgebra::DVector<f64>;
/// Dense matrix type used throughout the crate.
pub type Matrix = nalgebra::DMatrix<f64>;
