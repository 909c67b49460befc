//! Fiberwise balance: extreme round-norm radii of the unit cosphere bundle.

use crate::metrics::model::{FiberBalance, MetricModel};
use crate::sphere::{extrema_on_grid, field_extrema, Objective, SphereGrid, SpherePoint};

/// Inradius and circumradius of `S*_g(1)` and the balance `beta`.
///
/// Conformal: the fiber radii are `e^{phi}`, so the extrema of `phi`
/// (refined off the grid) give both radii. Ellipsoid: the radii are the
/// extreme semi-axes. Round: both equal the scale.
pub fn balance(metric: &MetricModel) -> FiberBalance {
    match metric {
        MetricModel::Round { radius } => FiberBalance::new(*radius, *radius),
        MetricModel::Ellipsoid { axes } => FiberBalance::new(axes[0], axes[2]),
        MetricModel::Conformal { phi } => {
            let (min, max) = field_extrema(phi);
            FiberBalance::new(min.value.exp(), max.value.exp())
        }
    }
}

/// Per-fiber eigenvalue sweep: extreme fiber radii found by maximizing and
/// minimizing the eigenvalues of the metric matrix over a point grid, with
/// local refinement. Cross-checks the closed forms in [`balance`].
pub fn fiber_radii_by_eigen_search(
    metric: &MetricModel,
    n_theta: usize,
    n_phi: usize,
) -> (f64, f64) {
    let grid = SphereGrid::new(n_theta, n_phi);
    let lo_fn = |q: &SpherePoint| eigen_bounds(metric, q).0;
    let hi_fn = |q: &SpherePoint| eigen_bounds(metric, q).1;
    let lo_obj = Objective::new(&lo_fn);
    let hi_obj = Objective::new(&hi_fn);
    let (lo, _) = extrema_on_grid(&lo_obj, &grid);
    let (_, hi) = extrema_on_grid(&hi_obj, &grid);
    (lo.value.sqrt(), hi.value.sqrt())
}

/// Eigenvalue range of the 2x2 metric matrix at `q`.
fn eigen_bounds(metric: &MetricModel, q: &SpherePoint) -> (f64, f64) {
    let a = metric.metric_matrix(q);
    let half_tr = 0.5 * (a.m11 + a.m22);
    let disc = (half_tr * half_tr - a.determinant()).max(0.0).sqrt();
    (half_tr - disc, half_tr + disc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{oscillation_field, HarmonicField};

    #[test]
    fn round_is_perfectly_balanced() {
        let b = balance(&MetricModel::round(1.0).unwrap());
        assert_eq!((b.inradius, b.circumradius, b.beta), (1.0, 1.0, 1.0));
        let b2 = balance(&MetricModel::round(2.5).unwrap());
        assert_eq!(b2.beta, 1.0);
        assert_eq!(b2.inradius, 2.5);
    }

    #[test]
    fn ellipsoid_balance_closed_form() {
        let b = balance(&MetricModel::ellipsoid(1.0, 1.0, 2.0).unwrap());
        assert_eq!(b.inradius, 1.0);
        assert_eq!(b.circumradius, 2.0);
        assert!((b.beta - 0.25).abs() < 1e-15);
    }

    #[test]
    fn conformal_balance_is_exp_oscillation() {
        let mut phi = HarmonicField::zeros(4);
        phi.set(2, 0, 0.15);
        phi.set(4, 2, -0.08);
        let metric = MetricModel::conformal(phi.clone());
        let b = balance(&metric);
        let osc = oscillation_field(&phi);
        assert!(
            (b.beta - (-2.0 * osc).exp()).abs() < 1e-8,
            "beta {} vs e^(-2 osc) {}",
            b.beta,
            (-2.0 * osc).exp()
        );
    }

    #[test]
    fn eigen_search_matches_closed_forms() {
        let metric = MetricModel::ellipsoid(0.8, 1.3, 1.7).unwrap();
        let (r, big_r) = fiber_radii_by_eigen_search(&metric, 64, 128);
        assert!((r - 0.8).abs() < 1e-7, "inradius {r}");
        assert!((big_r - 1.7).abs() < 1e-7, "circumradius {big_r}");

        let round = MetricModel::round(1.0).unwrap();
        let (r, big_r) = fiber_radii_by_eigen_search(&round, 16, 16);
        assert!((r - 1.0).abs() < 1e-12 && (big_r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn c0_small_fields_are_nearly_balanced() {
        // ||phi||_C0 < eps forces beta > e^{-4 eps}.
        for seed_coeff in [0.05_f64, 0.12, 0.2] {
            let mut phi = HarmonicField::zeros(3);
            phi.set(2, 1, seed_coeff);
            phi.set(3, -2, -0.4 * seed_coeff);
            let eps = crate::sphere::sup_norm_field(&phi) + 1e-12;
            let b = balance(&MetricModel::conformal(phi));
            assert!(b.beta > (-4.0 * eps).exp() - 1e-10);
        }
    }
}
