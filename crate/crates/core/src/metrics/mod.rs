//! Riemannian metric models on the sphere and their bulk geometry:
//! fiberwise balance, curvature pinching, area, diameter, and the first
//! Laplace eigenvalue.

pub mod area;
pub mod balance;
pub mod curvature;
pub mod diameter;
pub mod lambda1;
pub mod model;

pub use area::{area, gauss_bonnet_integral};
pub use balance::{balance, fiber_radii_by_eigen_search};
pub use curvature::{curvature_extremes_by_grid, curvature_fn, curvature_on_grid, curvature_stats};
pub use diameter::{diameter, DiameterEstimate};
pub use lambda1::lambda1;
pub use model::{CurvatureStats, FiberBalance, GeometryReport, MetricModel};

use crate::error::Result;

/// Assemble the bulk geometry of a metric in one pass.
///
/// `lambda1` is omitted for the ellipsoid variant, which does not carry a
/// conformal factor.
pub fn geometry(metric: &MetricModel, resolution: usize, band_limit: usize) -> Result<GeometryReport> {
    let a = area(metric);
    let d = diameter(metric, resolution);
    let lam = match lambda1(metric, band_limit) {
        Ok(v) => Some(v),
        Err(crate::error::Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(GeometryReport {
        area: a,
        volume_disk_bundle: 2.0 * std::f64::consts::PI * a,
        diameter: d.value,
        diameter_error_estimate: d.error_estimate,
        lambda1: lam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn geometry_volume_identity() {
        let report = geometry(&MetricModel::round(1.0).unwrap(), 32, 6).unwrap();
        assert_eq!(report.volume_disk_bundle, 2.0 * PI * report.area);
        assert!(report.lambda1.is_some());

        let ell = geometry(&MetricModel::ellipsoid(1.0, 1.0, 1.5).unwrap(), 32, 6).unwrap();
        assert!(ell.lambda1.is_none());
        assert!(ell.area > 0.0 && ell.diameter > 0.0);
    }
}
