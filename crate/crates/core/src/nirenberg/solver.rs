//! Spectral Newton solver for the Gauss curvature equation
//! `lap u = 1 - K e^{2u}` on the round sphere.
//!
//! The unknown is the mean-zero coefficient vector of `u`; the scaling
//! freedom of the metric is carried by a log-prescale `c` applied to `K`,
//! fixed each iteration so the curvature integrand satisfies the
//! Gauss-Bonnet compatibility `int e^{2c} K e^{2u} dA = 4 pi`. The Newton
//! system is the exact Jacobian in `(coefficients, c)`, solved densely, with
//! residual-based step halving. Antipodally symmetric curvatures are solved
//! in the even-degree subspace, which both halves the problem and preserves
//! the symmetry exactly.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::{BasisTable, HarmonicField, Parity, SphereGrid};

/// A positive curvature function sampled on a solver grid.
#[derive(Debug, Clone)]
pub struct PrescribedCurvature {
    grid: SphereGrid,
    values: Vec<f64>,
    antipodal: bool,
}

impl PrescribedCurvature {
    /// Sample a curvature function on the given grid.
    pub fn from_fn(grid: SphereGrid, f: impl Fn(&crate::sphere::SpherePoint) -> f64) -> Self {
        let values = grid.sample(f);
        Self::from_samples(grid, values)
    }

    /// Wrap existing samples; the antipodal flag is measured, not assumed.
    pub fn from_samples(grid: SphereGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len());
        let antipodal = match grid.antipodal_index(0) {
            None => false,
            Some(_) => (0..values.len()).all(|i| {
                let j = grid.antipodal_index(i).unwrap();
                (values[i] - values[j]).abs() < 1e-10
            }),
        };
        PrescribedCurvature {
            grid,
            values,
            antipodal,
        }
    }

    /// Evaluate a band-limited curvature on a grid sized for the solver.
    pub fn from_harmonic(field: &HarmonicField, band_limit: usize) -> Self {
        let grid = solver_grid(band_limit);
        let values = field.synthesize(&grid);
        Self::from_samples(grid, values)
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_antipodal(&self) -> bool {
        self.antipodal
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

/// Solver grid with dealiasing margin for `K e^{2u}` products.
pub fn solver_grid(band_limit: usize) -> SphereGrid {
    let n = 2 * band_limit + 16;
    SphereGrid::new(n, n)
}

/// A converged solution of the curvature equation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussSolution {
    /// Mean-zero conformal factor.
    pub u: HarmonicField,
    /// Sup norm of `lap u - 1 + K_eff e^{2u}` over the solver grid.
    pub residual: f64,
    pub iterations: usize,
    /// Multiplicative prescale `e^{2c}` applied to the input curvature for
    /// Gauss-Bonnet compatibility; the solution solves the equation with
    /// `K_eff = kappa_scale * K`.
    pub kappa_scale: f64,
}

pub fn solve_gauss_equation(
    curvature: &PrescribedCurvature,
    band_limit: usize,
    tol: f64,
) -> Result<GaussSolution> {
    let (k_min, _) = curvature.min_max();
    if k_min <= 0.0 {
        return Err(Error::Domain(format!(
            "prescribed curvature must be positive, found minimum {k_min}"
        )));
    }
    let grid = &curvature.grid;
    grid.check_band_limit(band_limit)?;
    let parity = if curvature.antipodal {
        Parity::Even
    } else {
        Parity::All
    };
    let basis = BasisTable::new(grid, band_limit, parity);
    let n = basis.n_modes();
    let eigs = basis.laplacian_eigenvalues();
    let sqrt_4pi = (4.0 * PI).sqrt();

    // unknowns: coefficients of every mode except the constant, plus c
    let const_col = basis
        .modes
        .iter()
        .position(|&(l, _)| l == 0)
        .expect("constant mode present");

    let mut a: DVector<f64> = DVector::zeros(n); // with a[const_col] = 0
    let max_iter = 60;

    let residual_data = |a: &DVector<f64>, c: f64| -> (Vec<f64>, f64, Vec<f64>) {
        // returns (weight field w = e^{2c} K e^{2u}, sup residual, residual field)
        let u_vals = basis.synthesize(a);
        let lap_vals = {
            let lap_coeffs =
                DVector::from_iterator(n, a.iter().zip(&eigs).map(|(ai, li)| -li * ai));
            basis.synthesize(&lap_coeffs)
        };
        let scale = (2.0 * c).exp();
        let mut w = Vec::with_capacity(grid.len());
        let mut r = Vec::with_capacity(grid.len());
        let mut sup: f64 = 0.0;
        for i in 0..grid.len() {
            let wi = scale * curvature.values[i] * (2.0 * u_vals[i]).exp();
            let ri = lap_vals[i] - 1.0 + wi;
            sup = sup.max(ri.abs());
            w.push(wi);
            r.push(ri);
        }
        (w, sup, r)
    };

    // fix c so the constant component of the residual vanishes
    let fix_c = |a: &DVector<f64>| -> f64 {
        let u_vals = basis.synthesize(a);
        let mut total = 0.0;
        for (i, q) in grid.weights().iter().enumerate() {
            total += q * curvature.values[i] * (2.0 * u_vals[i]).exp();
        }
        0.5 * (4.0 * PI / total).ln()
    };

    let mut c = fix_c(&a);
    let (mut w, mut sup, _) = residual_data(&a, c);
    let mut iterations = 0;
    while sup > tol {
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::SolverDiverged {
                iterations: iterations - 1,
                residual: sup,
            });
        }
        // residual coefficients: -lam a + proj(w) - sqrt(4 pi) e_00
        let w_coeffs = basis.project(grid, &w);
        let mut rhs = DVector::zeros(n);
        for i in 0..n {
            rhs[i] = -eigs[i] * a[i] + w_coeffs[i];
        }
        rhs[const_col] -= sqrt_4pi;

        // Jacobian: column j (mode) = -lam_j e_j + 2 M[w]_{., j}; column for c
        // replaces the constant-mode unknown: dR/dc = 2 proj(w).
        let mut jac = basis.mass_matrix(grid, &w) * 2.0;
        for j in 0..n {
            if j == const_col {
                continue;
            }
            jac[(j, j)] -= eigs[j];
        }
        for i in 0..n {
            jac[(i, const_col)] = 2.0 * w_coeffs[i];
        }

        let delta = jac
            .lu()
            .solve(&(-&rhs))
            .ok_or_else(|| Error::SolverDiverged {
                iterations,
                residual: sup,
            })?;

        // damped update
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let mut a_try = a.clone();
            for i in 0..n {
                if i != const_col {
                    a_try[i] += step * delta[i];
                }
            }
            let c_try = fix_c(&a_try);
            let (w_try, sup_try, _) = residual_data(&a_try, c_try);
            if sup_try < sup {
                a = a_try;
                c = c_try;
                w = w_try;
                sup = sup_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return Err(Error::SolverDiverged {
                iterations,
                residual: sup,
            });
        }
    }

    let u = basis.to_field(&a);
    Ok(GaussSolution {
        u,
        residual: sup,
        iterations,
        kappa_scale: (2.0 * c).exp(),
    })
}

/// Rescale a mean-zero factor until the manufactured curvature
/// `e^{-2u}(1 - lap u)` stays positive: shrinks `u` so that
/// `max lap u <= 1 - floor`.
pub fn scale_for_positive_curvature(u_star: &HarmonicField, floor: f64) -> HarmonicField {
    let lap = u_star.laplacian();
    let (_, max) = crate::sphere::field_extrema(&lap);
    if max.value > 1.0 - floor {
        u_star.scaled((1.0 - floor) / max.value)
    } else {
        u_star.clone()
    }
}

/// Manufacture a curvature whose exact solution is the given mean-zero
/// band-limited factor: `K = e^{-2 u*} (1 - lap u*)`.
pub fn manufactured_curvature(u_star: &HarmonicField, band_limit: usize) -> PrescribedCurvature {
    let grid = solver_grid(band_limit);
    let u_vals = u_star.synthesize(&grid);
    let lap_vals = u_star.laplacian().synthesize(&grid);
    let values = u_vals
        .iter()
        .zip(&lap_vals)
        .map(|(u, l)| (-2.0 * u).exp() * (1.0 - l))
        .collect();
    PrescribedCurvature::from_samples(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_curvature_solves_to_zero() {
        let grid = solver_grid(8);
        let k = PrescribedCurvature::from_fn(grid, |_| 1.0);
        assert!(k.is_antipodal());
        let sol = solve_gauss_equation(&k, 8, 1e-10).unwrap();
        assert!(sol.u.l2_norm_sq().sqrt() < 1e-10);
        assert!((sol.kappa_scale - 1.0).abs() < 1e-12);
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn manufactured_band_limited_recovery() {
        let mut u_star = HarmonicField::zeros(6);
        u_star.set(2, 0, 0.25);
        u_star.set(4, 2, -0.12);
        u_star.set(6, -4, 0.08);
        let u_star = scale_for_positive_curvature(&u_star, 0.3);
        let k = manufactured_curvature(&u_star, 16);
        assert!(k.is_antipodal());
        let sol = solve_gauss_equation(&k, 16, 1e-10).unwrap();
        let grid = solver_grid(16);
        let diff: f64 = sol
            .u
            .synthesize(&grid)
            .iter()
            .zip(&u_star.synthesize(&grid))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-8, "recovery error {diff}");
        assert!((sol.kappa_scale - 1.0).abs() < 1e-8);
    }

    #[test]
    fn non_antipodal_curvature_uses_full_basis() {
        // odd component in K; still positive and solvable at small size
        let mut u_star = HarmonicField::zeros(3);
        u_star.set(1, 0, 0.1);
        u_star.set(2, 1, 0.05);
        let k = manufactured_curvature(&u_star, 10);
        assert!(!k.is_antipodal());
        let sol = solve_gauss_equation(&k, 10, 1e-9).unwrap();
        let diff = (sol.u.get(1, 0) - 0.1).abs().max((sol.u.get(2, 1) - 0.05).abs());
        assert!(diff < 1e-8, "coefficient recovery error {diff}");
    }

    #[test]
    fn antipodal_symmetry_is_preserved_exactly() {
        let mut u_star = HarmonicField::zeros(4);
        u_star.set(2, -1, 0.2);
        u_star.set(4, 4, 0.1);
        let u_star = scale_for_positive_curvature(&u_star, 0.3);
        let k = manufactured_curvature(&u_star, 12);
        let sol = solve_gauss_equation(&k, 12, 1e-9).unwrap();
        assert!(sol.u.max_odd_coeff() < 1e-12);
    }

    #[test]
    fn gauss_bonnet_compatibility() {
        let mut u_star = HarmonicField::zeros(4);
        u_star.set(2, 2, 0.3);
        let k = manufactured_curvature(&u_star, 12);
        let sol = solve_gauss_equation(&k, 12, 1e-10).unwrap();
        let grid = solver_grid(12);
        let u_vals = sol.u.synthesize(&grid);
        let integrand: Vec<f64> = k
            .values()
            .iter()
            .zip(&u_vals)
            .map(|(kv, uv)| sol.kappa_scale * kv * (2.0 * uv).exp())
            .collect();
        let total = grid.integrate(&integrand);
        assert!((total - 4.0 * PI).abs() < 1e-8, "GB defect {}", total - 4.0 * PI);
    }

    #[test]
    fn nonpositive_curvature_rejected() {
        let grid = solver_grid(6);
        let k = PrescribedCurvature::from_fn(grid, |p| p.z());
        assert!(matches!(
            solve_gauss_equation(&k, 6, 1e-8),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mean_stays_zero() {
        let mut u_star = HarmonicField::zeros(4);
        u_star.set(2, 0, 0.4);
        let k = manufactured_curvature(&u_star, 10);
        let sol = solve_gauss_equation(&k, 10, 1e-9).unwrap();
        assert_eq!(sol.u.get(0, 0), 0.0);
    }
}
