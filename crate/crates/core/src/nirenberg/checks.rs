//! Inequality checks on solutions of the curvature equation: the symmetric
//! exponential-moment inequality, the pointwise lower bound on the
//! conformal factor, the two-tier gradient-energy bound, and the
//! oscillation chain through the explicit constants.
//!
//! Probability-measure integrals use `d sigma_0 = dA / (4 pi)` throughout.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nirenberg::constants::ConstantsReport;
use crate::nirenberg::solver::{GaussSolution, PrescribedCurvature};
use crate::sphere::{field_extrema, oscillation_field, HarmonicField, SphereGrid};

/// Margin of `(1/8) int |grad u|^2 dsigma - ln int e^u dsigma >= 0` for
/// mean-zero antipodally symmetric `u`.
pub fn check_onofri(u: &HarmonicField) -> Result<f64> {
    if !u.is_mean_zero(1e-10) {
        return Err(Error::Domain(format!(
            "the exponential-moment inequality needs a mean-zero input, a_00 = {}",
            u.get(0, 0)
        )));
    }
    if !u.is_antipodal(1e-10) {
        return Err(Error::Domain(format!(
            "the exponential-moment inequality needs antipodal symmetry; largest odd coefficient {}",
            u.max_odd_coeff()
        )));
    }
    let rhs = u.gradient_energy() / (4.0 * PI) / 8.0;
    let n = (2 * u.band_limit() + 16).max(48);
    let grid = SphereGrid::new(n, n);
    let exp_vals: Vec<f64> = u.synthesize(&grid).iter().map(|v| v.exp()).collect();
    let lhs = (grid.integrate(&exp_vals) / (4.0 * PI)).ln();
    Ok(rhs - lhs)
}

/// Margin of the pointwise bound `u >= ubar - 1`, i.e. `min u + 1` for the
/// mean-zero solutions produced by the solver.
pub fn check_min_bound(sol: &GaussSolution) -> f64 {
    let (min, _) = field_extrema(&sol.u);
    min.value + 1.0 - sol.u.mean()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientBoundReport {
    /// `int |grad u|^2 dsigma_0`.
    pub lhs: f64,
    /// Curvature-extreme tier, absent when `K_min e^{-2} >= 1` empties the
    /// logarithm.
    pub tier1_rhs: Option<f64>,
    pub tier1_margin: Option<f64>,
    /// Pinching tier `(e/delta + 1)/2`.
    pub tier2_rhs: f64,
    pub tier2_margin: f64,
    pub delta: f64,
}

/// Both gradient-energy bounds for a solution of the equation with
/// effective curvature `kappa_scale * K`.
pub fn check_gradient_bound(
    sol: &GaussSolution,
    curvature: &PrescribedCurvature,
) -> Result<GradientBoundReport> {
    let (k_min_raw, k_max_raw) = curvature.min_max();
    if k_min_raw <= 0.0 {
        return Err(Error::Domain("curvature must be positive".into()));
    }
    let k_min = sol.kappa_scale * k_min_raw;
    let k_max = sol.kappa_scale * k_max_raw;
    let delta = k_min / k_max;
    let lhs = sol.u.gradient_energy() / (4.0 * PI);

    let m0 = k_min * (-2.0f64).exp();
    let (tier1_rhs, tier1_margin) = if m0 < 1.0 {
        let rhs = (1.0 - m0) / (2.0 * m0) * (k_max / (1.0 - m0)).ln();
        (Some(rhs), Some(rhs - lhs))
    } else {
        (None, None)
    };
    let tier2_rhs = 0.5 * (std::f64::consts::E / delta + 1.0);
    Ok(GradientBoundReport {
        lhs,
        tier1_rhs,
        tier1_margin,
        tier2_rhs,
        tier2_margin: tier2_rhs - lhs,
        delta,
    })
}

/// The four stations of the oscillation chain,
/// `osc(u) <= 2 ||u||_C0 <= 2 C_S ||u||_H2 <= 2 C_S C_P ||lap u||_L2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationChain {
    pub osc: f64,
    pub two_sup_norm: f64,
    pub sobolev_bound: f64,
    pub laplacian_bound: f64,
}

impl OscillationChain {
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.osc <= self.two_sup_norm + slack
            && self.two_sup_norm <= self.sobolev_bound + slack
            && self.sobolev_bound <= self.laplacian_bound + slack
    }
}

pub fn oscillation_chain(sol: &GaussSolution, constants: &ConstantsReport) -> OscillationChain {
    let u = &sol.u;
    let (min, max) = field_extrema(u);
    let osc = max.value - min.value;
    let sup = max.value.abs().max(min.value.abs());
    let h2 = u.h2_norm();
    let lap_l2 = u.laplacian().l2_norm_sq().sqrt();
    OscillationChain {
        osc,
        two_sup_norm: 2.0 * sup,
        sobolev_bound: 2.0 * constants.cs_upper * h2,
        laplacian_bound: constants.chain_factor * lap_l2,
    }
}

/// `osc(f) = max f - min f`, evaluated from a field or from raw samples.
pub fn oscillation(field: &HarmonicField) -> f64 {
    oscillation_field(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nirenberg::constants::constants_report;
    use crate::nirenberg::solver::{manufactured_curvature, solve_gauss_equation};

    #[test]
    fn onofri_equality_at_zero() {
        let z = HarmonicField::zeros(4);
        let m = check_onofri(&z).unwrap();
        assert!(m.abs() < 1e-12);
    }

    #[test]
    fn onofri_positive_margin_for_even_bumps() {
        for eps in [0.1, 1.0] {
            let u = HarmonicField::basis(4, 2, 0).scaled(eps);
            let m = check_onofri(&u).unwrap();
            assert!(m > 0.0, "margin {m} at eps {eps}");
        }
    }

    #[test]
    fn onofri_rejects_bad_inputs() {
        let c = HarmonicField::constant(2, 1.0);
        assert!(check_onofri(&c).is_err());
        let odd = HarmonicField::basis(3, 1, 0);
        assert!(check_onofri(&odd).is_err());
    }

    #[test]
    fn onofri_randomized_even_fields() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut u = HarmonicField::zeros(6);
            for l in [2usize, 4, 6] {
                for m in -(l as i64)..=(l as i64) {
                    u.set(l, m, rng.random_range(-0.5..0.5));
                }
            }
            // normalize into the H1 ball of radius 3
            let h1 = (u.l2_norm_sq() + u.gradient_energy()).sqrt();
            if h1 > 3.0 {
                u = u.scaled(3.0 / h1);
            }
            let m = check_onofri(&u).unwrap();
            assert!(m >= -1e-10, "margin {m}");
        }
    }

    #[test]
    fn min_bound_round_case() {
        let grid = crate::nirenberg::solver::solver_grid(6);
        let k = PrescribedCurvature::from_fn(grid, |_| 1.0);
        let sol = solve_gauss_equation(&k, 6, 1e-10).unwrap();
        let margin = check_min_bound(&sol);
        assert!((margin - 1.0).abs() < 1e-9, "margin {margin}");
    }

    #[test]
    fn gradient_bound_round_case() {
        let grid = crate::nirenberg::solver::solver_grid(6);
        let k = PrescribedCurvature::from_fn(grid, |_| 1.0);
        let sol = solve_gauss_equation(&k, 6, 1e-10).unwrap();
        let rep = check_gradient_bound(&sol, &k).unwrap();
        assert!(rep.lhs.abs() < 1e-12);
        assert!(rep.tier1_margin.unwrap() > 0.0);
        assert!(rep.tier2_margin > 0.0);
        // K = 1: tier 2 reads (e + 1)/2
        assert!((rep.tier2_rhs - 0.5 * (std::f64::consts::E + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn lemma_chain_on_manufactured_solutions() {
        use crate::nirenberg::solver::scale_for_positive_curvature;
        let constants = constants_report(100);
        let cases: Vec<HarmonicField> = vec![
            {
                let mut u = HarmonicField::zeros(4);
                u.set(2, 0, 0.2);
                u
            },
            {
                let mut u = HarmonicField::zeros(6);
                u.set(2, 2, 0.15);
                u.set(4, -1, -0.1);
                u.set(6, 3, 0.05);
                u
            },
        ];
        for u_star in cases {
            let u_star = scale_for_positive_curvature(&u_star, 0.3);
            let k = manufactured_curvature(&u_star, 12);
            let sol = solve_gauss_equation(&k, 12, 1e-9).unwrap();
            assert!(check_min_bound(&sol) > 0.0);
            let grad = check_gradient_bound(&sol, &k).unwrap();
            assert!(grad.tier2_margin >= 0.0);
            if let Some(m1) = grad.tier1_margin {
                assert!(m1 >= 0.0);
            }
            let chain = oscillation_chain(&sol, &constants);
            assert!(chain.is_monotone(1e-12), "chain {chain:?}");
        }
    }

    #[test]
    fn chain_zero_and_strict_cases() {
        let constants = constants_report(100);
        let zero_sol = GaussSolution {
            u: HarmonicField::zeros(4),
            residual: 0.0,
            iterations: 0,
            kappa_scale: 1.0,
        };
        let chain = oscillation_chain(&zero_sol, &constants);
        assert_eq!(
            (chain.osc, chain.two_sup_norm, chain.sobolev_bound, chain.laplacian_bound),
            (0.0, 0.0, 0.0, 0.0)
        );

        let bump_sol = GaussSolution {
            u: HarmonicField::basis(4, 2, 0).scaled(0.3),
            residual: 0.0,
            iterations: 0,
            kappa_scale: 1.0,
        };
        let chain = oscillation_chain(&bump_sol, &constants);
        assert!(chain.osc < chain.two_sup_norm);
        assert!(chain.two_sup_norm < chain.sobolev_bound);
        assert!(chain.sobolev_bound < chain.laplacian_bound);
    }
}
