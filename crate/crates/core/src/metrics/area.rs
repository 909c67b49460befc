//! Area and the Gauss-Bonnet consistency integral.

use crate::metrics::curvature::curvature_on_grid;
use crate::metrics::model::MetricModel;
use crate::sphere::SphereGrid;

/// Grid adapted to the metric's smoothness for area-type quadrature.
pub(crate) fn quadrature_grid(metric: &MetricModel) -> SphereGrid {
    let n = match metric {
        MetricModel::Conformal { phi } => (2 * phi.band_limit() + 16).max(64),
        _ => 96,
    };
    SphereGrid::new(n, n)
}

/// `Area(S^2, g) = int dA_g` by quadrature of the area density.
pub fn area(metric: &MetricModel) -> f64 {
    let grid = quadrature_grid(metric);
    let density = grid.sample(|q| metric.area_density(q));
    grid.integrate(&density)
}

/// `int K_g dA_g`; equals `4 pi` for every smooth metric by Gauss-Bonnet,
/// so the defect measures discretization error end to end.
pub fn gauss_bonnet_integral(metric: &MetricModel) -> f64 {
    let grid = quadrature_grid(metric);
    let k = curvature_on_grid(metric, &grid);
    let density: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(&k)
        .map(|(q, ki)| ki * metric.area_density(q))
        .collect();
    grid.integrate(&density)
}
