//! Bregman-ball boundary samples around each input point, at the radius of
//! the computed circumcenter, as a flat CSV table.

use std::path::Path;

use anyhow::{bail, Context};
use bregman_cc::balls::ball_boundary;
use bregman_cc::bregman::{bregman_distance, Mode};
use bregman_cc::{LegendreFunction, PointSet, Vector};

use crate::json::format_num;

const SAMPLES_2D: usize = 128;
const SAMPLES_3D: usize = 400;

/// One row per sample: ball index, then coordinates. Balls whose center is
/// not interior to the domain are left out.
pub fn ball_rows(f: &LegendreFunction, s: &PointSet, center: &Vector, mode: Mode) -> anyhow::Result<Vec<(usize, Vector)>> {
    let samples = match s.dim() {
        2 => SAMPLES_2D,
        3 => SAMPLES_3D,
        n => bail!("plots need a 2-D or 3-D problem, got dimension {n}"),
    };
    let radius = match mode {
        Mode::Backward => bregman_distance(f, center, s.first())?,
        Mode::Forward => bregman_distance(f, s.first(), center)?,
    };
    let mut rows = Vec::new();
    for (i, q) in s.points().iter().enumerate() {
        if let Ok(boundary) = ball_boundary(f, q, radius, mode, samples) {
            rows.extend(boundary.into_iter().map(|p| (i, p)));
        }
    }
    Ok(rows)
}

pub fn write_csv(path: &Path, dim: usize, rows: &[(usize, Vector)]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    let header: Vec<&str> = ["ball", "x", "y", "z"].into_iter().take(dim + 1).collect();
    w.write_record(&header)?;
    for (ball, p) in rows {
        let mut record = vec![ball.to_string()];
        record.extend(p.iter().map(|&c| format_num(c)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
