//! Pointwise Gauss curvature and its extremes.

use nalgebra::Vector3;

use crate::metrics::model::{ellipsoid_support, CurvatureStats, MetricModel};
use crate::sphere::{extrema_on_grid, HarmonicField, Objective, SphereGrid, SpherePoint};

/// Pointwise curvature as a closure over the metric.
///
/// Conformal metrics use the spectral Laplacian of the conformal factor,
/// `K = e^{-2 phi} (1 - lap phi)`; ellipsoid metrics use the closed-form
/// curvature of the embedded surface pulled back to the parameter sphere,
/// `K(q) = 1 / ((abc)^2 S(q)^2)`.
pub fn curvature_fn(metric: &MetricModel) -> Box<dyn Fn(&SpherePoint) -> f64 + Sync + '_> {
    match metric {
        MetricModel::Round { radius } => {
            let k = 1.0 / (radius * radius);
            Box::new(move |_q| k)
        }
        MetricModel::Ellipsoid { axes } => {
            let scale = (axes[0] * axes[1] * axes[2]).powi(2);
            let axes = *axes;
            Box::new(move |q| {
                let s = ellipsoid_support(&axes, q);
                1.0 / (scale * s * s)
            })
        }
        MetricModel::Conformal { phi } => {
            let lap = phi.laplacian();
            let phi = phi.clone();
            Box::new(move |q| (-2.0 * phi.eval(q)).exp() * (1.0 - lap.eval(q)))
        }
    }
}

/// Curvature sampled on a grid.
pub fn curvature_on_grid(metric: &MetricModel, grid: &SphereGrid) -> Vec<f64> {
    match metric {
        MetricModel::Conformal { phi } => {
            // one synthesis per field beats per-node evaluation
            let lap = phi.laplacian();
            let phi_vals = phi.synthesize(grid);
            let lap_vals = lap.synthesize(grid);
            phi_vals
                .iter()
                .zip(&lap_vals)
                .map(|(p, l)| (-2.0 * p).exp() * (1.0 - l))
                .collect()
        }
        _ => {
            let f = curvature_fn(metric);
            grid.sample(|q| f(q))
        }
    }
}

/// Curvature extremes and pinching ratio.
///
/// Ellipsoid and round variants return the closed forms; the conformal
/// variant scans a grid adapted to the band limit and refines the extrema.
pub fn curvature_stats(metric: &MetricModel) -> CurvatureStats {
    match metric {
        MetricModel::Round { radius } => {
            let k = 1.0 / (radius * radius);
            CurvatureStats::new(k, k)
        }
        MetricModel::Ellipsoid { axes } => {
            let [a, b, c] = *axes;
            CurvatureStats::new(a * a / (b * b * c * c), c * c / (a * a * b * b))
        }
        MetricModel::Conformal { phi } => {
            let stats = conformal_curvature_extremes(phi);
            CurvatureStats::new(stats.0, stats.1)
        }
    }
}

/// Grid-scan + refined extremes of the conformal curvature field.
fn conformal_curvature_extremes(phi: &HarmonicField) -> (f64, f64) {
    let n = (2 * phi.band_limit() + 2).max(48);
    let grid = SphereGrid::new(n, n);
    let lap = phi.laplacian();
    let f = |q: &SpherePoint| (-2.0 * phi.eval(q)).exp() * (1.0 - lap.eval(q));
    let grad = |q: &SpherePoint| -> Vector3<f64> {
        // K = e^{-2 phi} (1 - lap phi)
        let (pv, pg) = phi.eval_with_gradient(q);
        let (lv, lg) = lap.eval_with_gradient(q);
        (-2.0 * pv).exp() * (-2.0 * pg * (1.0 - lv) - lg)
    };
    let obj = Objective::with_gradient(&f, &grad);
    let (min, max) = extrema_on_grid(&obj, &grid);
    (min.value, max.value)
}

/// Refined curvature extremes found numerically, for cross-checks against
/// the closed forms stored by [`curvature_stats`].
pub fn curvature_extremes_by_grid(
    metric: &MetricModel,
    n_theta: usize,
    n_phi: usize,
) -> (f64, f64) {
    let grid = SphereGrid::new(n_theta, n_phi);
    let f = curvature_fn(metric);
    let func = |q: &SpherePoint| f(q);
    let obj = Objective::new(&func);
    let (min, max) = extrema_on_grid(&obj, &grid);
    (min.value, max.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_curvature_is_constant_one() {
        let stats = curvature_stats(&MetricModel::round(1.0).unwrap());
        assert_eq!((stats.k_min, stats.k_max), (1.0, 1.0));
        assert_eq!(stats.delta, Some(1.0));

        // phi = 0 through the conformal path
        let flat = MetricModel::conformal(HarmonicField::zeros(4));
        let stats = curvature_stats(&flat);
        assert!((stats.k_min - 1.0).abs() < 1e-10);
        assert!((stats.k_max - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ellipsoid_closed_forms() {
        let stats = curvature_stats(&MetricModel::ellipsoid(1.0, 2.0, 3.0).unwrap());
        assert!((stats.k_min - 1.0 / 36.0).abs() < 1e-15);
        assert!((stats.k_max - 9.0 / 4.0).abs() < 1e-15);
        let delta = stats.delta.unwrap();
        assert!((delta - (1.0f64 / 3.0).powi(4)).abs() < 1e-15);
    }

    #[test]
    fn grid_extremes_match_closed_form() {
        let metric = MetricModel::ellipsoid(1.0, 1.0, 1.5).unwrap();
        let stats = curvature_stats(&metric);
        let (lo, hi) = curvature_extremes_by_grid(&metric, 96, 96);
        assert!((lo - stats.k_min).abs() < 1e-5, "{lo} vs {}", stats.k_min);
        assert!((hi - stats.k_max).abs() < 1e-5, "{hi} vs {}", stats.k_max);
    }

    #[test]
    fn conformal_negative_curvature_detected() {
        // Large zonal bumps push 1 - lap(phi) negative somewhere.
        let phi = HarmonicField::basis(4, 2, 0).scaled(0.8);
        let stats = curvature_stats(&MetricModel::conformal(phi));
        assert!(stats.k_min < 0.0);
        assert_eq!(stats.delta, None);
    }

    #[test]
    fn degenerate_pinching_flag() {
        let stats = CurvatureStats::new(1e-8, 1.0);
        assert!(stats.is_degenerate());
        let healthy = CurvatureStats::new(0.5, 1.0);
        assert!(!healthy.is_degenerate());
    }
}
