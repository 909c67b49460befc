//! The zero-mean Green's function of the round-sphere Laplacian.
//!
//! `G(p, q) = -(1/2pi) ln |p - q| + C` with the additive constant fixed so
//! that `int_q G(p, q) dA(q) = 0`. Integrals against `G` split a small
//! geodesic cap around the singular point, where the logarithm integrates in
//! closed form, from a regular product quadrature outside.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sphere::grid::{gauss_legendre, SpherePoint};

/// The constant making the Green's function zero-mean.
pub const GREEN_CONSTANT: f64 = 0.030_740_328_530_378_128; // (2 ln 2 - 1) / (4 pi)

fn green_constant() -> f64 {
    (2.0 * (2.0f64).ln() - 1.0) / (4.0 * PI)
}

/// Zero-mean Green's function; errors on (nearly) coincident points.
pub fn green_function(p: &SpherePoint, q: &SpherePoint) -> Result<f64> {
    let dist = p.chord_distance(q);
    if dist < 1e-14 {
        return Err(Error::GreenSingularity { dist });
    }
    Ok(-dist.ln() / (2.0 * PI) + green_constant())
}

/// Closed-form `int_{cap} (G - C) dA` over the geodesic cap of radius `eps`.
///
/// With `s = sin(eps / 2)` the log integral evaluates to `s^2 (1 - 2 ln 2s)`;
/// at `eps = pi` this is `1 - 2 ln 2`, the full-sphere value of the
/// non-constant part.
pub fn cap_integral_nonconstant(eps: f64) -> f64 {
    let s = (eps / 2.0).sin();
    s * s * (1.0 - 2.0 * (2.0 * s).ln())
}

/// Closed-form `int_{cap} G dA` over the geodesic cap of radius `eps`.
pub fn cap_integral(eps: f64) -> f64 {
    cap_integral_nonconstant(eps) + green_constant() * 2.0 * PI * (1.0 - eps.cos())
}

/// Quadrature rule adapted to the singular point: Gauss-Legendre in
/// `cos(theta')` over the cap complement `[-1, cos eps]` crossed with a
/// uniform longitude rule around the axis through `p`.
struct PolarRule {
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
    /// `-(1/2pi) ln(2 sin(theta'/2))` per node, the non-constant Green part.
    log_kernel: Vec<f64>,
}

fn polar_rule(p: &SpherePoint, eps: f64, n_theta: usize, n_phi: usize) -> PolarRule {
    let (xs, ws) = gauss_legendre(n_theta);
    let (e1, e2) = p.tangent_frame();
    let lo = -1.0;
    let hi = eps.cos();
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    let mut log_kernel = Vec::with_capacity(n_theta * n_phi);
    for (x_ref, w_ref) in xs.iter().zip(&ws) {
        let ct = mid + half * x_ref;
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        // chord |p - q| = 2 sin(theta'/2) = sqrt(2 - 2 cos theta')
        let chord = (2.0 - 2.0 * ct).sqrt();
        let kern = -chord.ln() / (2.0 * PI);
        let w = w_ref * half * dphi;
        for j in 0..n_phi {
            let phi = dphi * j as f64;
            let dir = phi.cos() * e1 + phi.sin() * e2;
            nodes.push(SpherePoint::from_unit(ct * p.coords() + st * dir));
            weights.push(w);
            log_kernel.push(kern);
        }
    }
    PolarRule {
        nodes,
        weights,
        log_kernel,
    }
}

/// `int_q G(p, q) f(q) dA(q)` by cap splitting.
///
/// The cap contributes `f(p) int_cap G` (the linear term of `f` averages out
/// over the rotationally symmetric cap); outside, the integrand is smooth and
/// the polar rule converges geometrically.
pub fn integrate_green_weighted(
    p: &SpherePoint,
    f: impl Fn(&SpherePoint) -> f64,
    eps: f64,
    n_theta: usize,
    n_phi: usize,
) -> f64 {
    let rule = polar_rule(p, eps, n_theta, n_phi);
    let c = green_constant();
    let mut acc = f(p) * cap_integral(eps);
    for i in 0..rule.nodes.len() {
        acc += rule.weights[i] * (rule.log_kernel[i] + c) * f(&rule.nodes[i]);
    }
    acc
}

/// `int_q G(p, q) dA(q)` by cap splitting; should vanish to quadrature error.
pub fn integrate_green(p: &SpherePoint, eps: f64, n_theta: usize, n_phi: usize) -> f64 {
    integrate_green_weighted(p, |_| 1.0, eps, n_theta, n_phi)
}

/// The non-constant part `int_q (G(p, q) - C) dA(q)` by cap splitting.
///
/// Converges to `1 - 2 ln 2` independently of `p`.
pub fn integrate_green_nonconstant(p: &SpherePoint, eps: f64, n_theta: usize, n_phi: usize) -> f64 {
    let rule = polar_rule(p, eps, n_theta, n_phi);
    let mut acc = cap_integral_nonconstant(eps);
    for i in 0..rule.nodes.len() {
        acc += rule.weights[i] * rule.log_kernel[i];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn green_constant_matches_formula() {
        assert!((GREEN_CONSTANT - green_constant()).abs() < 1e-17);
    }

    #[test]
    fn antipodal_value() {
        // |p - (-p)| = 2, so G = -(ln 2)/(2 pi) + (2 ln 2 - 1)/(4 pi) = -1/(4 pi).
        let p = SpherePoint::new(0.3, -0.4, 0.86).unwrap();
        let g = green_function(&p, &p.antipode()).unwrap();
        assert!((g - (-1.0 / (4.0 * PI))).abs() < 1e-15);
    }

    #[test]
    fn symmetry() {
        let pairs = [
            ((0.1, 0.2, 0.97), (-0.5, 0.5, 0.7)),
            ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
            ((0.6, -0.6, 0.5), (0.9, 0.1, -0.4)),
        ];
        for (a, b) in pairs {
            let p = SpherePoint::new(a.0, a.1, a.2).unwrap();
            let q = SpherePoint::new(b.0, b.1, b.2).unwrap();
            assert_eq!(
                green_function(&p, &q).unwrap(),
                green_function(&q, &p).unwrap()
            );
        }
    }

    #[test]
    fn coincident_points_error() {
        let p = SpherePoint::new(0.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            green_function(&p, &p),
            Err(Error::GreenSingularity { .. })
        ));
    }

    #[test]
    fn full_sphere_nonconstant_part() {
        // cap formula at eps = pi covers the whole sphere: 1 - 2 ln 2.
        let expect = 1.0 - 2.0 * (2.0f64).ln();
        assert!((cap_integral_nonconstant(PI) - expect).abs() < 1e-15);
    }

    #[test]
    fn zero_mean_by_cap_splitting() {
        let p = SpherePoint::new(0.2, 0.5, 0.84).unwrap();
        let total = integrate_green(&p, 0.05, 200, 16);
        assert!(total.abs() < 1e-8, "integral {total}");
        let nonconst = integrate_green_nonconstant(&p, 0.05, 200, 16);
        let expect = 1.0 - 2.0 * (2.0f64).ln();
        assert!((nonconst - expect).abs() < 1e-10, "nonconst {nonconst}");
    }
}
