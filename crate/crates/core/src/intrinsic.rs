//! Correlation dimension of a point cloud.
//!
//! `C(r)` is the fraction of point pairs closer than `r`; on a
//! `d`-dimensional manifold it grows like `r^d` for small `r`, so the slope
//! of `ln C(r)` against `ln r` estimates the intrinsic dimension.

use serde::{Deserialize, Serialize};

use crate::error::{contract, CoreError, Result};
use crate::problem::euclidean;

/// Default radius window, as quantiles of the pairwise distances.
pub const DEFAULT_RADIUS_QUANTILES: (f64, f64) = (0.005, 0.05);
pub const DEFAULT_STEPS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl CorrelationCurve {
    /// Mean finite-difference slope of `ln C` against `ln r`, skipping `C = 0`.
    pub fn mean_slope(&self) -> Result<f64> {
        let logs: Vec<(f64, f64)> = self
            .radii
            .iter()
            .zip(&self.values)
            .filter(|(_, &c)| c > 0.0)
            .map(|(&r, &c)| (r.ln(), c.ln()))
            .collect();
        if logs.len() < 2 {
            return Err(CoreError::UndefinedIndicator(
                "fewer than two radii with C(r) > 0".into(),
            ));
        }
        let slopes: Vec<f64> = logs
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        Ok((slopes.iter().sum::<f64>() / slopes.len() as f64).max(0.0))
    }
}

/// All pairwise distances, sorted ascending.
pub fn pairwise_distances(points: &[Vec<f64>]) -> Result<Vec<f64>> {
    if points.len() < 2 {
        return contract("need at least two points");
    }
    let mut d = Vec::with_capacity(points.len() * (points.len() - 1) / 2);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            d.push(euclidean(&points[i], &points[j]));
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn fraction_below(sorted: &[f64], r: f64) -> f64 {
    sorted.partition_point(|&d| d < r) as f64 / sorted.len() as f64
}

/// Fraction of unordered pairs within distance `r` (strictly).
pub fn correlation_integral(points: &[Vec<f64>], r: f64) -> Result<f64> {
    if r <= 0.0 {
        return contract("radius must be positive");
    }
    Ok(fraction_below(&pairwise_distances(points)?, r))
}

fn log_spaced(r0: f64, rmax: f64, steps: usize) -> Vec<f64> {
    let (a, b) = (r0.ln(), rmax.ln());
    (0..steps)
        .map(|i| (a + (b - a) * i as f64 / (steps - 1) as f64).exp())
        .collect()
}

pub fn correlation_curve(points: &[Vec<f64>], radii: &[f64]) -> Result<CorrelationCurve> {
    let sorted = pairwise_distances(points)?;
    Ok(CorrelationCurve {
        radii: radii.to_vec(),
        values: radii.iter().map(|&r| fraction_below(&sorted, r)).collect(),
    })
}

/// Dimension from `steps` log-spaced radii between `r0` and `rmax`.
pub fn intrinsic_dimension(points: &[Vec<f64>], r0: f64, rmax: f64, steps: usize) -> Result<f64> {
    if !(r0 > 0.0 && r0 < rmax) || steps < 2 {
        return contract("need 0 < r0 < rmax and at least two steps");
    }
    correlation_curve(points, &log_spaced(r0, rmax, steps))?.mean_slope()
}

/// Dimension over the default radius window of this cloud's own distances.
pub fn intrinsic_dimension_auto(points: &[Vec<f64>]) -> Result<f64> {
    let sorted = pairwise_distances(points)?;
    let at = |q: f64| sorted[((sorted.len() - 1) as f64 * q).round() as usize];
    let (r0, rmax) = (
        at(DEFAULT_RADIUS_QUANTILES.0),
        at(DEFAULT_RADIUS_QUANTILES.1),
    );
    if !(r0 > 0.0 && r0 < rmax) {
        return Err(CoreError::UndefinedIndicator(
            "too many coincident points".into(),
        ));
    }
    let radii = log_spaced(r0, rmax, DEFAULT_STEPS);
    CorrelationCurve {
        values: radii.iter().map(|&r| fraction_below(&sorted, r)).collect(),
        radii,
    }
    .mean_slope()
}
