//! Boundary samples of Bregman balls in two and three dimensions, for
//! plotting.
//!
//! Along any ray from the center `c`, both `t ↦ D_f(c + t u, c)` and
//! `t ↦ D_f(c, c + t u)` are increasing, so each ray meets the sphere of
//! radius `r` at most once and bisection finds it. A ray that leaves the
//! domain first is cut off at the domain boundary.

use std::f64::consts::PI;

use crate::bregman::{bregman_distance, Mode};
use crate::{Error, LegendreFunction, Result, Vector};

/// Unit directions: evenly spaced angles in 2-D, a Fibonacci lattice in 3-D.
pub fn sample_directions(dim: usize, samples: usize) -> Result<Vec<Vector>> {
    match dim {
        2 => Ok((0..samples)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / samples as f64;
                Vector::from_column_slice(&[a.cos(), a.sin()])
            })
            .collect()),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            Ok((0..samples)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / samples as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    Vector::from_column_slice(&[r * a.cos(), r * a.sin(), z])
                })
                .collect())
        }
        _ => Err(Error::InvalidInput(format!(
            "ball sampling needs dimension 2 or 3, got {dim}"
        ))),
    }
}

/// Points on `{x : D_f(x, c) = r}` (backward) or `{y : D_f(c, y) = r}`
/// (forward), one per sample direction.
pub fn ball_boundary(
    f: &LegendreFunction,
    center: &Vector,
    radius: f64,
    mode: Mode,
    samples: usize,
) -> Result<Vec<Vector>> {
    f.require_interior(center)?;
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("ball radius must be finite and nonnegative, got {radius}")));
    }
    let scale = 1.0 + center.norm();
    let dist = |x: &Vector| -> f64 {
        let d = match mode {
            Mode::Backward => bregman_distance(f, x, center),
            Mode::Forward => bregman_distance(f, center, x),
        };
        d.unwrap_or(f64::INFINITY)
    };
    Ok(sample_directions(f.dim(), samples)?
        .into_iter()
        .map(|u| {
            let t = ray_hit(|t| dist(&(center + &u * t)), radius, scale);
            center + u * t
        })
        .collect())
}

/// Largest `t` with `d(t) <= r`, for `d` increasing from `d(0) = 0` and
/// infinite off the domain.
fn ray_hit(d: impl Fn(f64) -> f64, r: f64, scale: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1e-3 * scale;
    let mut grew = 0;
    while d(hi) <= r {
        lo = hi;
        hi *= 2.0;
        grew += 1;
        if grew > 200 {
            return lo;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if d(mid) <= r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
