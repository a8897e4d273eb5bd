//! Legendre functions: the five catalog potentials, their analytic
//! conjugates, and an extension point for user-supplied functions.
//!
//! Every catalog entry is separable, `f(x) = sum_i phi(x_i)`, so values,
//! gradients and Hessians are assembled coordinatewise from a scalar
//! potential `phi` whose domain is an interval.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::tolerances::DOMAIN_MARGIN;
use crate::{Error, Matrix, Result, Vector};

/// Three-way classification of a point against `dom f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// Every active constraint holds with slack at least [`DOMAIN_MARGIN`].
    Interior,
    /// In `dom f` but not in its margin-interior.
    Boundary,
    Outside,
}

impl Membership {
    pub fn in_domain(self) -> bool {
        !matches!(self, Membership::Outside)
    }

    pub fn is_interior(self) -> bool {
        matches!(self, Membership::Interior)
    }

    fn combine(self, other: Membership) -> Membership {
        use Membership::*;
        match (self, other) {
            (Outside, _) | (_, Outside) => Outside,
            (Boundary, _) | (_, Boundary) => Boundary,
            _ => Interior,
        }
    }
}

/// Capability flags recorded per function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub conjugate_domain_open: bool,
    pub allows_forward_projections: bool,
    pub domain_is_full_space: bool,
}

/// A Legendre function on `R^n`, dimension-agnostic.
///
/// Implementors may assume `value` receives points of `dom f`, and that
/// `gradient`/`hessian` receive interior points; [`LegendreFunction`] checks
/// those preconditions before delegating.
pub trait Potential: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn capabilities(&self) -> Capabilities;

    fn membership(&self, x: &Vector) -> Membership;

    fn conjugate_membership(&self, y: &Vector) -> Membership;

    /// `f(x)`, or `+inf` outside `dom f`.
    fn value(&self, x: &Vector) -> f64;

    fn gradient(&self, x: &Vector) -> Vector;

    fn hessian(&self, x: &Vector) -> Matrix;

    /// `grad f*(y)`, the inverse of the gradient map.
    fn conjugate_gradient(&self, y: &Vector) -> Vector;

    /// `f*(y)`. The default uses the Fenchel-Young equality at
    /// `x = grad f*(y)`.
    fn conjugate_value(&self, y: &Vector) -> f64 {
        let x = self.conjugate_gradient(y);
        x.dot(y) - self.value(&x)
    }

    /// `f*` as a potential in its own right, when known in closed form.
    fn conjugate(&self) -> Option<Arc<dyn Potential>> {
        None
    }

    /// First coordinate responsible for a non-interior classification.
    fn offending_coordinate(&self, _x: &Vector) -> Option<usize> {
        None
    }

    fn offending_conjugate_coordinate(&self, _y: &Vector) -> Option<usize> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };
    const NONNEGATIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_closed: true,
        hi_closed: false,
    };
    const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };
    const NEGATIVE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: 0.0,
        lo_closed: false,
        hi_closed: false,
    };
    const UNIT: Interval = Interval {
        lo: 0.0,
        hi: 1.0,
        lo_closed: true,
        hi_closed: true,
    };

    fn classify(&self, t: f64) -> Membership {
        if t.is_nan() {
            return Membership::Outside;
        }
        let above = t > self.lo || (self.lo_closed && t == self.lo);
        let below = t < self.hi || (self.hi_closed && t == self.hi);
        if !(above && below) {
            return Membership::Outside;
        }
        let lo_slack = self.lo == f64::NEG_INFINITY || t - self.lo >= DOMAIN_MARGIN;
        let hi_slack = self.hi == f64::INFINITY || self.hi - t >= DOMAIN_MARGIN;
        if lo_slack && hi_slack {
            Membership::Interior
        } else {
            Membership::Boundary
        }
    }

    fn is_real_line(&self) -> bool {
        *self == Interval::REAL_LINE
    }
}

/// `t ln t` with the convention `0 ln 0 = 0`.
fn xlogx(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

fn logistic(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

fn softplus(s: f64) -> f64 {
    s.max(0.0) + (-s.abs()).exp().ln_1p()
}

/// The built-in separable Legendre functions.
///
/// The first five are the catalog proper; the remaining four are their
/// conjugates, registered so that the duality layer can treat `f*` as a
/// first-class function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Catalog {
    /// `1/2 |x|^2` on `R^n`.
    Energy,
    /// `sum x ln x - x` on `[0, inf)^n`.
    NegativeEntropy,
    /// `sum x ln x + (1 - x) ln(1 - x)` on `[0, 1]^n`.
    FermiDirac,
    /// `-sum ln x` on `(0, inf)^n`.
    BurgEntropy,
    /// `-sum sqrt x` on `[0, inf)^n`.
    NegSqrt,
    /// `sum exp y` on `R^n`; conjugate of negative entropy.
    ExpSum,
    /// `sum ln(1 + exp y)` on `R^n`; conjugate of Fermi-Dirac entropy.
    SoftplusSum,
    /// `sum -1 - ln(-y)` on `(-inf, 0)^n`; conjugate of Burg entropy.
    BurgConjugate,
    /// `sum -1/(4y)` on `(-inf, 0)^n`; conjugate of `neg_sqrt`.
    NegSqrtConjugate,
}

impl Catalog {
    pub const ALL: [Catalog; 9] = [
        Catalog::Energy,
        Catalog::NegativeEntropy,
        Catalog::FermiDirac,
        Catalog::BurgEntropy,
        Catalog::NegSqrt,
        Catalog::ExpSum,
        Catalog::SoftplusSum,
        Catalog::BurgConjugate,
        Catalog::NegSqrtConjugate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Catalog::Energy => "energy",
            Catalog::NegativeEntropy => "negative_entropy",
            Catalog::FermiDirac => "fermi_dirac",
            Catalog::BurgEntropy => "burg_entropy",
            Catalog::NegSqrt => "neg_sqrt",
            Catalog::ExpSum => "exp_sum",
            Catalog::SoftplusSum => "softplus_sum",
            Catalog::BurgConjugate => "burg_conjugate",
            Catalog::NegSqrtConjugate => "neg_sqrt_conjugate",
        }
    }

    pub fn from_name(name: &str) -> Option<Catalog> {
        Catalog::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn dual(self) -> Catalog {
        match self {
            Catalog::Energy => Catalog::Energy,
            Catalog::NegativeEntropy => Catalog::ExpSum,
            Catalog::FermiDirac => Catalog::SoftplusSum,
            Catalog::BurgEntropy => Catalog::BurgConjugate,
            Catalog::NegSqrt => Catalog::NegSqrtConjugate,
            Catalog::ExpSum => Catalog::NegativeEntropy,
            Catalog::SoftplusSum => Catalog::FermiDirac,
            Catalog::BurgConjugate => Catalog::BurgEntropy,
            Catalog::NegSqrtConjugate => Catalog::NegSqrt,
        }
    }

    fn domain(self) -> Interval {
        match self {
            Catalog::Energy | Catalog::ExpSum | Catalog::SoftplusSum => Interval::REAL_LINE,
            Catalog::NegativeEntropy | Catalog::NegSqrt => Interval::NONNEGATIVE,
            Catalog::FermiDirac => Interval::UNIT,
            Catalog::BurgEntropy => Interval::POSITIVE,
            Catalog::BurgConjugate | Catalog::NegSqrtConjugate => Interval::NEGATIVE,
        }
    }

    fn phi(self, t: f64) -> f64 {
        match self {
            Catalog::Energy => 0.5 * t * t,
            Catalog::NegativeEntropy => xlogx(t) - t,
            Catalog::FermiDirac => xlogx(t) + xlogx(1.0 - t),
            Catalog::BurgEntropy => -t.ln(),
            Catalog::NegSqrt => -t.sqrt(),
            Catalog::ExpSum => t.exp(),
            Catalog::SoftplusSum => softplus(t),
            Catalog::BurgConjugate => -1.0 - (-t).ln(),
            Catalog::NegSqrtConjugate => -0.25 / t,
        }
    }

    fn dphi(self, t: f64) -> f64 {
        match self {
            Catalog::Energy => t,
            Catalog::NegativeEntropy => t.ln(),
            Catalog::FermiDirac => t.ln() - (-t).ln_1p(),
            Catalog::BurgEntropy | Catalog::BurgConjugate => -1.0 / t,
            Catalog::NegSqrt => -0.5 / t.sqrt(),
            Catalog::ExpSum => t.exp(),
            Catalog::SoftplusSum => logistic(t),
            Catalog::NegSqrtConjugate => 0.25 / (t * t),
        }
    }

    fn d2phi(self, t: f64) -> f64 {
        match self {
            Catalog::Energy => 1.0,
            Catalog::NegativeEntropy => 1.0 / t,
            Catalog::FermiDirac => 1.0 / (t * (1.0 - t)),
            Catalog::BurgEntropy | Catalog::BurgConjugate => 1.0 / (t * t),
            Catalog::NegSqrt => 0.25 / (t * t.sqrt()),
            Catalog::ExpSum => t.exp(),
            Catalog::SoftplusSum => {
                let s = logistic(t);
                s * (1.0 - s)
            }
            Catalog::NegSqrtConjugate => -0.5 / (t * t * t),
        }
    }

    fn capabilities(self) -> Capabilities {
        let own = self.domain();
        let dual = self.dual().domain();
        let dual_open = !dual.lo_closed && !dual.hi_closed;
        Capabilities {
            conjugate_domain_open: dual_open,
            allows_forward_projections: matches!(
                self,
                Catalog::Energy | Catalog::NegativeEntropy | Catalog::FermiDirac
            ),
            domain_is_full_space: own.is_real_line(),
        }
    }

    fn classify_all(interval: Interval, x: &Vector) -> Membership {
        x.iter()
            .fold(Membership::Interior, |acc, &t| acc.combine(interval.classify(t)))
    }

    fn first_non_interior(interval: Interval, x: &Vector) -> Option<usize> {
        x.iter().position(|&t| !interval.classify(t).is_interior())
    }
}

impl Potential for Catalog {
    fn name(&self) -> &str {
        Catalog::name(*self)
    }

    fn capabilities(&self) -> Capabilities {
        Catalog::capabilities(*self)
    }

    fn membership(&self, x: &Vector) -> Membership {
        Catalog::classify_all(self.domain(), x)
    }

    fn conjugate_membership(&self, y: &Vector) -> Membership {
        Catalog::classify_all(self.dual().domain(), y)
    }

    fn value(&self, x: &Vector) -> f64 {
        if !self.membership(x).in_domain() {
            return f64::INFINITY;
        }
        crate::numeric::compensated_sum(x.iter().map(|&t| self.phi(t)))
    }

    fn gradient(&self, x: &Vector) -> Vector {
        x.map(|t| self.dphi(t))
    }

    fn hessian(&self, x: &Vector) -> Matrix {
        Matrix::from_diagonal(&x.map(|t| self.d2phi(t)))
    }

    fn conjugate_gradient(&self, y: &Vector) -> Vector {
        let dual = self.dual();
        y.map(|s| dual.dphi(s))
    }

    fn conjugate_value(&self, y: &Vector) -> f64 {
        Potential::value(&self.dual(), y)
    }

    fn conjugate(&self) -> Option<Arc<dyn Potential>> {
        Some(Arc::new(self.dual()))
    }

    fn offending_coordinate(&self, x: &Vector) -> Option<usize> {
        Catalog::first_non_interior(self.domain(), x)
    }

    fn offending_conjugate_coordinate(&self, y: &Vector) -> Option<usize> {
        Catalog::first_non_interior(self.dual().domain(), y)
    }
}

/// A Legendre function bound to an ambient dimension, with checked entry
/// points.
#[derive(Clone, Debug)]
pub struct LegendreFunction {
    potential: Arc<dyn Potential>,
    dim: usize,
}

impl LegendreFunction {
    pub fn catalog(kind: Catalog, dim: usize) -> Self {
        Self {
            potential: Arc::new(kind),
            dim,
        }
    }

    /// Looks up a catalog function by its snake_case identifier.
    pub fn by_name(name: &str, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Catalog::from_name(name)
            .map(|c| Self::catalog(c, dim))
            .ok_or_else(|| Error::UnknownFunction(name.to_owned()))
    }

    /// Wraps a user-supplied potential without checks.
    pub fn custom(potential: Arc<dyn Potential>, dim: usize) -> Self {
        Self { potential, dim }
    }

    /// Wraps a user-supplied potential after checking
    /// `grad f*(grad f(x)) = x` at every interior sample.
    pub fn register_validated(
        potential: Arc<dyn Potential>,
        dim: usize,
        samples: &[Vector],
    ) -> Result<Self> {
        let f = Self::custom(potential, dim);
        for x in samples {
            f.check_dim(x)?;
            if !f.membership(x).is_interior() {
                return Err(f.domain_error(x));
            }
            let back = f.potential.conjugate_gradient(&f.potential.gradient(x));
            let err = (&back - x).norm();
            if !(err <= 1e-10 * (1.0 + x.norm())) {
                return Err(Error::InvalidInput(format!(
                    "{}: gradient round trip fails at {x:?} (error {err:e})",
                    f.name()
                )));
            }
        }
        Ok(f)
    }

    pub fn name(&self) -> &str {
        self.potential.name()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn capabilities(&self) -> Capabilities {
        self.potential.capabilities()
    }

    pub fn potential(&self) -> &Arc<dyn Potential> {
        &self.potential
    }

    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Interior/boundary/outside classification. A vector of the wrong
    /// length is reported as outside.
    pub fn membership(&self, x: &Vector) -> Membership {
        if x.len() != self.dim {
            return Membership::Outside;
        }
        self.potential.membership(x)
    }

    pub fn conjugate_membership(&self, y: &Vector) -> Membership {
        if y.len() != self.dim {
            return Membership::Outside;
        }
        self.potential.conjugate_membership(y)
    }

    /// `f(x)` on `dom f` (boundary included), `+inf` elsewhere.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        if !self.membership(x).in_domain() {
            return Ok(f64::INFINITY);
        }
        Ok(self.potential.value(x))
    }

    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        self.require_interior(x)?;
        Ok(self.potential.gradient(x))
    }

    pub fn hess(&self, x: &Vector) -> Result<Matrix> {
        self.require_interior(x)?;
        Ok(self.potential.hessian(x))
    }

    pub fn grad_conj(&self, y: &Vector) -> Result<Vector> {
        self.require_conjugate_interior(y)?;
        Ok(self.potential.conjugate_gradient(y))
    }

    pub fn eval_conj(&self, y: &Vector) -> Result<f64> {
        self.check_dim(y)?;
        if !self.conjugate_membership(y).in_domain() {
            return Ok(f64::INFINITY);
        }
        Ok(self.potential.conjugate_value(y))
    }

    /// `f*` bound to the same dimension.
    pub fn conjugate(&self) -> Result<LegendreFunction> {
        self.potential
            .conjugate()
            .map(|p| Self::custom(p, self.dim))
            .ok_or_else(|| Error::Unsupported {
                function: self.name().to_owned(),
                capability: "an analytic conjugate",
            })
    }

    pub fn require_interior(&self, x: &Vector) -> Result<()> {
        self.check_dim(x)?;
        if self.membership(x).is_interior() {
            Ok(())
        } else {
            Err(self.domain_error(x))
        }
    }

    pub fn require_conjugate_interior(&self, y: &Vector) -> Result<()> {
        self.check_dim(y)?;
        if self.conjugate_membership(y).is_interior() {
            Ok(())
        } else {
            let coordinate = self.potential.offending_conjugate_coordinate(y);
            Err(Error::ConjugateDomain {
                function: self.name().to_owned(),
                coordinate,
                value: coordinate.map_or(f64::NAN, |i| y[i]),
            })
        }
    }

    fn domain_error(&self, x: &Vector) -> Error {
        let coordinate = self.potential.offending_coordinate(x);
        Error::Domain {
            function: self.name().to_owned(),
            coordinate,
            value: coordinate.map_or(f64::NAN, |i| x[i]),
        }
    }

    pub(crate) fn value_unchecked(&self, x: &Vector) -> f64 {
        self.potential.value(x)
    }

    pub(crate) fn gradient_unchecked(&self, x: &Vector) -> Vector {
        self.potential.gradient(x)
    }

    pub(crate) fn hessian_unchecked(&self, x: &Vector) -> Matrix {
        self.potential.hessian(x)
    }

    pub(crate) fn conjugate_gradient_unchecked(&self, y: &Vector) -> Vector {
        self.potential.conjugate_gradient(y)
    }
}
