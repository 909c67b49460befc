//! Riemannian metric models on the 2-sphere.
//!
//! Three families: conformal deformations `e^{2 phi} g_0` of the round
//! metric, pullbacks of ellipsoid surfaces under the axis-scaling map, and
//! round metrics scaled by a radius (the tensor is `R^2 g_0`, so lengths
//! scale by `R`).

use nalgebra::{Matrix2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::{HarmonicField, SpherePoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum MetricModel {
    Conformal {
        phi: HarmonicField,
    },
    Ellipsoid {
        /// Semi-axes, stored sorted ascending.
        axes: [f64; 3],
    },
    Round {
        #[serde(rename = "R")]
        radius: f64,
    },
}

impl MetricModel {
    pub fn conformal(phi: HarmonicField) -> Self {
        MetricModel::Conformal { phi }
    }

    /// Ellipsoid metric; axes are sorted on construction.
    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::Domain(format!(
                "ellipsoid axes must be positive, got ({a}, {b}, {c})"
            )));
        }
        let mut axes = [a, b, c];
        axes.sort_by(|x, y| x.partial_cmp(y).unwrap());
        Ok(MetricModel::Ellipsoid { axes })
    }

    pub fn round(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        Ok(MetricModel::Round { radius })
    }

    /// Re-sort axes after deserialization and validate positivity.
    pub fn validate(&self) -> Result<MetricModel> {
        match self {
            MetricModel::Ellipsoid { axes } => Self::ellipsoid(axes[0], axes[1], axes[2]),
            MetricModel::Round { radius } => Self::round(*radius),
            MetricModel::Conformal { phi } => Ok(MetricModel::Conformal { phi: phi.clone() }),
        }
    }

    /// Matrix of the metric at `q` in a `g_0`-orthonormal tangent frame.
    ///
    /// Its eigenvalues are the squared fiber radii of the unit cosphere at
    /// `q` measured by the round dual norm.
    pub fn metric_matrix(&self, q: &SpherePoint) -> Matrix2<f64> {
        match self {
            MetricModel::Conformal { phi } => {
                let f = (2.0 * phi.eval(q)).exp();
                Matrix2::new(f, 0.0, 0.0, f)
            }
            MetricModel::Round { radius } => {
                let f = radius * radius;
                Matrix2::new(f, 0.0, 0.0, f)
            }
            MetricModel::Ellipsoid { axes } => {
                let (e1, e2) = q.tangent_frame();
                let d = Vector3::new(axes[0], axes[1], axes[2]);
                let d1 = e1.component_mul(&d);
                let d2 = e2.component_mul(&d);
                Matrix2::new(d1.dot(&d1), d1.dot(&d2), d1.dot(&d2), d2.dot(&d2))
            }
        }
    }

    /// `sqrt(g(v, v))` for an ambient tangent vector `v` at `q`.
    pub fn speed(&self, q: &SpherePoint, v: &Vector3<f64>) -> f64 {
        match self {
            MetricModel::Conformal { phi } => phi.eval(q).exp() * v.norm(),
            MetricModel::Round { radius } => radius * v.norm(),
            MetricModel::Ellipsoid { axes } => {
                let d = Vector3::new(axes[0], axes[1], axes[2]);
                v.component_mul(&d).norm()
            }
        }
    }

    /// Density of `dA_g` against the round measure `dA_{g_0}` at `q`.
    pub fn area_density(&self, q: &SpherePoint) -> f64 {
        match self {
            MetricModel::Conformal { phi } => (2.0 * phi.eval(q)).exp(),
            MetricModel::Round { radius } => radius * radius,
            MetricModel::Ellipsoid { axes } => {
                let [a, b, c] = *axes;
                a * b * c * ellipsoid_support(axes, q).sqrt()
            }
        }
    }

    /// Whether the metric is invariant under the antipodal map.
    pub fn is_antipodal(&self, tol: f64) -> bool {
        match self {
            MetricModel::Conformal { phi } => phi.is_antipodal(tol),
            _ => true,
        }
    }

    /// A short human-readable digest for reports.
    pub fn digest(&self) -> String {
        match self {
            MetricModel::Conformal { phi } => format!(
                "conformal(band_limit = {}, |coeffs|_2 = {:.6})",
                phi.band_limit(),
                phi.l2_norm_sq().sqrt()
            ),
            MetricModel::Ellipsoid { axes } => {
                format!("ellipsoid(axes = [{}, {}, {}])", axes[0], axes[1], axes[2])
            }
            MetricModel::Round { radius } => format!("round(R = {radius})"),
        }
    }
}

/// `S(q) = x^2/a^2 + y^2/b^2 + z^2/c^2` for `q` on the parameter sphere.
pub(crate) fn ellipsoid_support(axes: &[f64; 3], q: &SpherePoint) -> f64 {
    let v = q.coords();
    (v.x / axes[0]).powi(2) + (v.y / axes[1]).powi(2) + (v.z / axes[2]).powi(2)
}

/// Inradius, circumradius, and balance of the unit cosphere bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberBalance {
    pub inradius: f64,
    pub circumradius: f64,
    /// `(inradius / circumradius)^2`, in `(0, 1]`.
    pub beta: f64,
}

impl FiberBalance {
    pub fn new(inradius: f64, circumradius: f64) -> Self {
        let ratio = inradius / circumradius;
        FiberBalance {
            inradius,
            circumradius,
            beta: ratio * ratio,
        }
    }
}

/// Pointwise Gauss curvature extremes and the pinching ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureStats {
    pub k_min: f64,
    pub k_max: f64,
    /// `k_min / k_max` when the curvature is positive, else undefined.
    pub delta: Option<f64>,
}

impl CurvatureStats {
    pub fn new(k_min: f64, k_max: f64) -> Self {
        let delta = if k_min > 0.0 { Some(k_min / k_max) } else { None };
        CurvatureStats { k_min, k_max, delta }
    }

    /// Pinching so extreme the balance estimate loses its meaning.
    pub fn is_degenerate(&self) -> bool {
        matches!(self.delta, Some(d) if d < 1e-6)
    }
}

/// Bulk geometric quantities of a metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub area: f64,
    /// `2 pi * area`, the symplectic volume of the unit disk bundle.
    pub volume_disk_bundle: f64,
    pub diameter: f64,
    pub diameter_error_estimate: f64,
    /// First nonzero Laplace eigenvalue; absent for the ellipsoid variant.
    pub lambda1: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipsoid_axes_sorted() {
        let m = MetricModel::ellipsoid(2.0, 0.5, 1.0).unwrap();
        match m {
            MetricModel::Ellipsoid { axes } => assert_eq!(axes, [0.5, 1.0, 2.0]),
            _ => unreachable!(),
        }
        assert!(MetricModel::ellipsoid(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn json_formats() {
        let round = MetricModel::round(1.5).unwrap();
        let json = serde_json::to_string(&round).unwrap();
        assert_eq!(json, r#"{"variant":"round","R":1.5}"#);

        let ell = MetricModel::ellipsoid(1.0, 1.0, 2.0).unwrap();
        let json = serde_json::to_string(&ell).unwrap();
        assert_eq!(json, r#"{"variant":"ellipsoid","axes":[1.0,1.0,2.0]}"#);

        let phi = HarmonicField::basis(2, 2, 0).scaled(0.1);
        let conf = MetricModel::conformal(phi);
        let json = serde_json::to_string(&conf).unwrap();
        let back: MetricModel = serde_json::from_str(&json).unwrap();
        assert_eq!(conf, back);
    }

    #[test]
    fn metric_matrix_round_cases() {
        let q = SpherePoint::new(0.4, -0.3, 0.87).unwrap();
        let r = MetricModel::round(2.0).unwrap();
        let m = r.metric_matrix(&q);
        assert!((m.m11 - 4.0).abs() < 1e-14 && (m.m22 - 4.0).abs() < 1e-14);
        assert!(m.m12.abs() < 1e-14);

        // sphere-shaped ellipsoid agrees with the round matrix
        let e = MetricModel::ellipsoid(2.0, 2.0, 2.0).unwrap();
        let me = e.metric_matrix(&q);
        assert!((me - m).norm() < 1e-12);
    }

    #[test]
    fn ellipsoid_metric_matrix_eigen_range() {
        let m = MetricModel::ellipsoid(1.0, 1.0, 2.0).unwrap();
        // On the equator the fiber reaches the long axis.
        let q = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        let a = m.metric_matrix(&q);
        let tr = a.m11 + a.m22;
        let det = a.determinant();
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let (lo, hi) = (tr / 2.0 - disc, tr / 2.0 + disc);
        assert!((lo - 1.0).abs() < 1e-12);
        assert!((hi - 4.0).abs() < 1e-12);
    }

    #[test]
    fn speed_matches_matrix_quadratic_form() {
        let metrics = [
            MetricModel::ellipsoid(0.7, 1.1, 1.9).unwrap(),
            MetricModel::round(1.3).unwrap(),
            MetricModel::conformal(HarmonicField::basis(3, 2, -1).scaled(0.2)),
        ];
        let q = SpherePoint::new(0.5, 0.6, 0.62).unwrap();
        let (e1, e2) = q.tangent_frame();
        let v = 0.8 * e1 - 0.45 * e2;
        for metric in metrics {
            let a = metric.metric_matrix(&q);
            let comp = nalgebra::Vector2::new(v.dot(&e1), v.dot(&e2));
            let quad = (comp.transpose() * a * comp)[(0, 0)];
            assert!((metric.speed(&q, &v) - quad.sqrt()).abs() < 1e-12);
        }
    }
}
