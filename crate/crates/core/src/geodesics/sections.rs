//! Perimeters of the coordinate-plane sections of an ellipsoid.
//!
//! The three principal ellipses are closed geodesics (fixed-point sets of
//! reflection isometries), so their perimeters are always available as
//! analytic closed-geodesic candidates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::metrics::MetricModel;
use crate::sphere::gauss_legendre;

/// Ellipse perimeter `4 int_0^{pi/2} sqrt(a^2 sin^2 + b^2 cos^2)` by a
/// fixed 64-point Gauss-Legendre rule (the integrand is analytic).
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let (xs, ws) = gauss_legendre(64);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(&ws) {
        let t = 0.25 * PI * (x + 1.0);
        let (s, c) = t.sin_cos();
        acc += w * (a * a * s * s + b * b * c * c).sqrt();
    }
    acc * 0.25 * PI * 4.0
}

/// Same perimeter by adaptive Simpson; an independent rule for cross-checks.
pub fn ellipse_perimeter_adaptive(a: f64, b: f64, rel_tol: f64) -> f64 {
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        (a * a * s * s + b * b * c * c).sqrt()
    };
    4.0 * adaptive_simpson(&f, 0.0, 0.5 * PI, rel_tol * (a.max(b)), 24)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Perimeters of the three principal sections, ordered as the ellipses with
/// semi-axis pairs `(a, b)`, `(a, c)`, `(b, c)` for sorted axes `a <= b <= c`.
pub fn principal_section_lengths(metric: &MetricModel) -> Result<[f64; 3]> {
    match metric {
        MetricModel::Ellipsoid { axes } => {
            let [a, b, c] = *axes;
            Ok([
                ellipse_perimeter(a, b),
                ellipse_perimeter(a, c),
                ellipse_perimeter(b, c),
            ])
        }
        _ => Err(Error::Unsupported(
            "principal sections are defined for the ellipsoid variant".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_sections_are_great_circles() {
        let m = MetricModel::ellipsoid(1.0, 1.0, 1.0).unwrap();
        let lens = principal_section_lengths(&m).unwrap();
        for len in lens {
            assert!((len - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn prolate_sections() {
        let m = MetricModel::ellipsoid(1.0, 1.0, 2.0).unwrap();
        let [ab, ac, bc] = principal_section_lengths(&m).unwrap();
        assert!((ab - 2.0 * PI).abs() < 1e-12);
        let p12 = ellipse_perimeter(1.0, 2.0);
        assert!((ac - p12).abs() < 1e-12);
        assert!((bc - p12).abs() < 1e-12);
        // frozen reference for P(1, 2)
        assert!((p12 - 9.688448220547676).abs() < 1e-16 * 1e4);
    }

    #[test]
    fn two_rules_agree() {
        for (a, b) in [(1.0, 2.0), (0.5, 1.9), (1.0, 1.0), (0.7, 0.71)] {
            let gl = ellipse_perimeter(a, b);
            let simpson = ellipse_perimeter_adaptive(a, b, 1e-12);
            assert!(
                (gl - simpson).abs() < 1e-10 * gl,
                "rules disagree for ({a}, {b}): {gl} vs {simpson}"
            );
        }
    }

    #[test]
    fn perimeter_monotonicity() {
        // perimeter(a, b) >= 2 pi min(a, b)
        for (a, b) in [(1.0, 1.5), (0.4, 2.0), (1.1, 1.1)] {
            assert!(ellipse_perimeter(a, b) >= 2.0 * PI * a.min(b) - 1e-12);
        }
    }

    #[test]
    fn non_ellipsoid_unsupported() {
        assert!(principal_section_lengths(&MetricModel::round(1.0).unwrap()).is_err());
    }
}
