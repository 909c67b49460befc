//! First Laplace eigenvalue of conformal metrics.
//!
//! For `g = e^{2 phi} g_0` the eigenvalue problem `Delta_g u + lambda u = 0`
//! becomes the generalized symmetric problem `Delta_0 u = -lambda e^{2 phi} u`.
//! In the orthonormal harmonic basis the stiffness matrix is the diagonal
//! `l(l+1)` and the mass matrix is a weighted Gram matrix; a Cholesky
//! reduction turns the pencil into an ordinary symmetric eigenproblem whose
//! second-smallest eigenvalue is `lambda_1` (the smallest is the deflated
//! constant direction at zero).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::metrics::model::MetricModel;
use crate::sphere::{BasisTable, HarmonicField, Parity, SphereGrid};

pub fn lambda1(metric: &MetricModel, band_limit: usize) -> Result<f64> {
    if band_limit < 2 {
        return Err(Error::Domain(format!(
            "band limit {band_limit} cannot resolve the first eigenspace"
        )));
    }
    let phi = match metric {
        MetricModel::Conformal { phi } => phi.clone(),
        MetricModel::Round { radius } => HarmonicField::constant(0, radius.ln()),
        MetricModel::Ellipsoid { .. } => {
            return Err(Error::Unsupported(
                "lambda1 requires the conformal factor, which the ellipsoid variant does not carry"
                    .into(),
            ))
        }
    };
    let n = 2 * band_limit + 16;
    let grid = SphereGrid::new(n, n);
    let basis = BasisTable::new(&grid, band_limit, Parity::All);
    let weight: Vec<f64> = phi.synthesize(&grid).iter().map(|p| (2.0 * p).exp()).collect();
    let mass = basis.mass_matrix(&grid, &weight);
    let eigs = basis.laplacian_eigenvalues();

    let chol = nalgebra::linalg::Cholesky::new(mass)
        .ok_or_else(|| Error::Domain("mass matrix not positive definite".into()))?;
    let l = chol.l();
    let stiff = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eigs));
    let tmp = l
        .solve_lower_triangular(&stiff)
        .ok_or_else(|| Error::Domain("singular Cholesky factor".into()))?;
    let reduced = l
        .solve_lower_triangular(&tmp.transpose())
        .ok_or_else(|| Error::Domain("singular Cholesky factor".into()))?;
    let sym = 0.5 * (&reduced + reduced.transpose());
    let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // values[0] is the constant mode at ~0
    Ok(values[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::area::area;
    use std::f64::consts::PI;

    #[test]
    fn round_spectrum() {
        let lam = lambda1(&MetricModel::round(1.0).unwrap(), 8).unwrap();
        assert!((lam - 2.0).abs() < 1e-8, "lambda1 {lam}");
        // scaled round: lambda_1 = 2 / R^2
        let lam2 = lambda1(&MetricModel::round(2.0).unwrap(), 8).unwrap();
        assert!((lam2 - 0.5).abs() < 1e-8);
    }

    #[test]
    fn hersch_equality_for_constant_factor() {
        let metric = MetricModel::conformal(HarmonicField::constant(2, 0.3));
        let lam = lambda1(&metric, 8).unwrap();
        let a = area(&metric);
        assert!((lam * a - 8.0 * PI).abs() < 1e-6, "product {}", lam * a);
    }

    #[test]
    fn hersch_bound_for_random_conformal_factors() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let mut phi = HarmonicField::zeros(4);
            for l in 1..=4usize {
                for m in -(l as i64)..=(l as i64) {
                    phi.set(l, m, 0.15 * (rng.random::<f64>() - 0.5));
                }
            }
            let metric = MetricModel::conformal(phi);
            let lam = lambda1(&metric, 12).unwrap();
            let a = area(&metric);
            assert!(
                lam * a <= 8.0 * PI + 1e-7,
                "Hersch violated: {} > 8 pi",
                lam * a
            );
        }
    }

    #[test]
    fn ellipsoid_unsupported() {
        let err = lambda1(&MetricModel::ellipsoid(1.0, 1.0, 2.0).unwrap(), 8);
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }
}
