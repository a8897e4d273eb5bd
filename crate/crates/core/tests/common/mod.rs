#![allow(dead_code)]

use bregman_cc::{Catalog, Vector};
use rand::Rng;

/// A box well inside the domain of each catalog function.
pub fn sample_box(kind: Catalog) -> (f64, f64) {
    match kind {
        Catalog::Energy | Catalog::ExpSum | Catalog::SoftplusSum => (-3.0, 3.0),
        Catalog::NegativeEntropy | Catalog::BurgEntropy | Catalog::NegSqrt => (0.1, 4.0),
        Catalog::FermiDirac => (0.05, 0.95),
        Catalog::BurgConjugate | Catalog::NegSqrtConjugate => (-4.0, -0.1),
    }
}

pub fn random_interior(rng: &mut impl Rng, kind: Catalog, n: usize) -> Vector {
    let (lo, hi) = sample_box(kind);
    Vector::from_fn(n, |_, _| rng.gen_range(lo..hi))
}

pub fn v(xs: &[f64]) -> Vector {
    Vector::from_column_slice(xs)
}

pub fn triangle() -> Vec<Vec<f64>> {
    vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]]
}

pub fn quarter_triangle() -> Vec<Vec<f64>> {
    vec![vec![0.25, 0.25, 0.25], vec![0.25, 0.5, 0.25], vec![0.25, 0.25, 0.5]]
}

pub fn burg_collinear() -> Vec<Vec<f64>> {
    vec![vec![1.0, 2.0, 1.0], vec![0.5, 1.5, 0.5], vec![1.5, 2.5, 1.5]]
}

/// Central-difference gradient of `f` at `x`.
pub fn fd_gradient(f: impl Fn(&Vector) -> f64, x: &Vector, h: f64) -> Vector {
    Vector::from_fn(x.len(), |i, _| {
        let mut p = x.clone();
        p[i] += h;
        let mut m = x.clone();
        m[i] -= h;
        (f(&p) - f(&m)) / (2.0 * h)
    })
}
