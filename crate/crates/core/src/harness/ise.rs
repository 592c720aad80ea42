use crate::estimator::{evaluate, CoefficientSet};
use crate::harness::TargetDensity;

/// `points` equally spaced values from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "a grid needs at least two points");
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Trapezoidal `∫ (f - g)²` from values on a uniform grid.
pub fn ise_on_grid(estimate: &[f64], truth: &[f64], lo: f64, hi: f64) -> f64 {
    assert_eq!(estimate.len(), truth.len());
    assert!(estimate.len() >= 2);
    let h = (hi - lo) / (estimate.len() - 1) as f64;
    let last = estimate.len() - 1;
    estimate
        .iter()
        .zip(truth)
        .enumerate()
        .map(|(i, (e, t))| {
            let d = (e - t).powi(2);
            if i == 0 || i == last {
                0.5 * d
            } else {
                d
            }
        })
        .sum::<f64>()
        * h
}

/// Integrated squared error of `ĝ` over the density's interval.
pub fn ise(coeffs: &CoefficientSet, density: TargetDensity, grid_points: usize) -> f64 {
    let (lo, hi) = density.interval();
    let grid = uniform_grid(lo, hi, grid_points);
    let truth: Vec<f64> = grid.iter().map(|&x| density.pdf(x)).collect();
    ise_on_grid(&evaluate(coeffs, &grid), &truth, lo, hi)
}
