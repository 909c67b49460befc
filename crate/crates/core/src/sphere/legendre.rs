//! Fully normalized associated Legendre functions.
//!
//! `plm` computes `Phat_l^m(x) = N_l^m P_l^m(x)` with
//! `N_l^m = sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)` and no Condon-Shortley
//! phase, so that the real spherical harmonics built on top are
//! L2-orthonormal on the unit sphere. The normalization is folded into the
//! three-term recurrence; the raw `(l+m)!` factors would overflow f64 long
//! before the band limits used here.

use std::f64::consts::PI;

/// Index into the packed triangular `(l, m)` layout, `0 <= m <= l <= l_max`.
#[inline]
pub fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Number of packed `(l, m)` entries up to `l_max`.
#[inline]
pub fn tri_len(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 2) / 2
}

/// Evaluate all `Phat_l^m(x)` for `0 <= m <= l <= l_max`.
///
/// `x = cos(theta)`, `s = sin(theta) >= 0`. Output is packed by [`tri`].
pub fn plm(l_max: usize, x: f64, s: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), tri_len(l_max));
    out[tri(0, 0)] = (1.0 / (4.0 * PI)).sqrt();
    if l_max == 0 {
        return;
    }
    // Diagonal Phat_m^m = sqrt((2m+1)/(2m)) * s * Phat_{m-1}^{m-1}.
    for m in 1..=l_max {
        let f = ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
        out[tri(m, m)] = f * s * out[tri(m - 1, m - 1)];
    }
    // First off-diagonal Phat_{m+1}^m = sqrt(2m+3) x Phat_m^m.
    for m in 0..l_max {
        out[tri(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * x * out[tri(m, m)];
    }
    // Upward recurrence in l.
    for m in 0..=l_max {
        for l in (m + 2)..=l_max {
            let (a, b) = recurrence_ab(l, m);
            out[tri(l, m)] = a * x * out[tri(l - 1, m)] - b * out[tri(l - 2, m)];
        }
    }
}

/// Coefficients of `Phat_l^m = a x Phat_{l-1}^m - b Phat_{l-2}^m`.
#[inline]
fn recurrence_ab(l: usize, m: usize) -> (f64, f64) {
    let l2 = (l * l) as f64;
    let m2 = (m * m) as f64;
    let a = ((4.0 * l2 - 1.0) / (l2 - m2)).sqrt();
    let b = (((2 * l + 1) as f64 * (((l - 1) * (l - 1)) as f64 - m2))
        / ((2 * l - 3) as f64 * (l2 - m2)))
        .sqrt();
    (a, b)
}

/// Evaluate `W_l^m = Phat_l^m / sin(theta)` for `1 <= m <= l <= l_max`.
///
/// The quotient satisfies the same recurrence as `Phat` and stays finite at
/// the poles, which is what makes gradient evaluation pole-safe. Slots with
/// `m = 0` are left at zero.
pub fn plm_over_sin(l_max: usize, x: f64, s: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), tri_len(l_max));
    for v in out.iter_mut() {
        *v = 0.0;
    }
    if l_max == 0 {
        return;
    }
    // W_1^1 = Phat_1^1 / s with Phat_1^1 = sqrt(3/(8 pi)) s.
    out[tri(1, 1)] = (3.0 / (8.0 * PI)).sqrt();
    for m in 2..=l_max {
        let f = ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
        out[tri(m, m)] = f * s * out[tri(m - 1, m - 1)];
    }
    for m in 1..l_max {
        out[tri(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * x * out[tri(m, m)];
    }
    for m in 1..=l_max {
        for l in (m + 2)..=l_max {
            let (a, b) = recurrence_ab(l, m);
            out[tri(l, m)] = a * x * out[tri(l - 1, m)] - b * out[tri(l - 2, m)];
        }
    }
}

/// Evaluate `d Phat_l^m / d theta` for all `0 <= m <= l <= l_max`.
///
/// Uses `sin(theta) dPhat_l^m/dtheta = l x Phat_l^m - A_l^m Phat_{l-1}^m`
/// rewritten through `W = Phat / sin` so the poles need no special casing,
/// and `dPhat_l^0/dtheta = -sqrt(l(l+1)) Phat_l^1` for the zonal column.
pub fn plm_dtheta(l_max: usize, p: &[f64], w: &[f64], x: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), tri_len(l_max));
    out[tri(0, 0)] = 0.0;
    for l in 1..=l_max {
        let ll = (l * (l + 1)) as f64;
        out[tri(l, 0)] = -ll.sqrt() * p[tri(l, 1)];
        for m in 1..=l {
            let a = ((2 * l + 1) as f64 * ((l * l - m * m) as f64) / (2 * l - 1) as f64).sqrt();
            let prev = if l >= m + 1 { w[tri(l - 1, m)] } else { 0.0 };
            out[tri(l, m)] = (l as f64) * x * w[tri(l, m)] - a * prev;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plm_vec(l_max: usize, theta: f64) -> Vec<f64> {
        let mut out = vec![0.0; tri_len(l_max)];
        plm(l_max, theta.cos(), theta.sin(), &mut out);
        out
    }

    #[test]
    fn low_degree_closed_forms() {
        let theta = 0.7_f64;
        let (x, s) = (theta.cos(), theta.sin());
        let p = plm_vec(4, theta);
        let c00 = (1.0 / (4.0 * PI)).sqrt();
        assert!((p[tri(0, 0)] - c00).abs() < 1e-15);
        assert!((p[tri(1, 0)] - (3.0 / (4.0 * PI)).sqrt() * x).abs() < 1e-15);
        assert!((p[tri(1, 1)] - (3.0 / (8.0 * PI)).sqrt() * s).abs() < 1e-15);
        // Phat_2^0 = sqrt(5/4pi) (3x^2-1)/2
        let p20 = (5.0 / (4.0 * PI)).sqrt() * 0.5 * (3.0 * x * x - 1.0);
        assert!((p[tri(2, 0)] - p20).abs() < 1e-14);
        // Phat_2^1 = sqrt(5/(24 pi)) 3 x s
        let p21 = (5.0 / (24.0 * PI)).sqrt() * 3.0 * x * s;
        assert!((p[tri(2, 1)] - p21).abs() < 1e-14);
        // Phat_2^2 = sqrt(5/(96 pi)) 3 s^2
        let p22 = (5.0 / (96.0 * PI)).sqrt() * 3.0 * s * s;
        assert!((p[tri(2, 2)] - p22).abs() < 1e-14);
    }

    #[test]
    fn over_sin_matches_quotient() {
        let l_max = 24;
        for &theta in &[0.3f64, 1.1, 2.4] {
            let (x, s) = (theta.cos(), theta.sin());
            let mut p = vec![0.0; tri_len(l_max)];
            let mut w = vec![0.0; tri_len(l_max)];
            plm(l_max, x, s, &mut p);
            plm_over_sin(l_max, x, s, &mut w);
            for l in 1..=l_max {
                for m in 1..=l {
                    let q = p[tri(l, m)] / s;
                    assert!(
                        (w[tri(l, m)] - q).abs() < 1e-10 * (1.0 + q.abs()),
                        "W mismatch at l={l} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn dtheta_matches_finite_difference() {
        let l_max = 16;
        let h = 1e-6;
        for &theta in &[0.4f64, 1.3, 2.0] {
            let mut p = vec![0.0; tri_len(l_max)];
            let mut w = vec![0.0; tri_len(l_max)];
            let mut d = vec![0.0; tri_len(l_max)];
            plm(l_max, theta.cos(), theta.sin(), &mut p);
            plm_over_sin(l_max, theta.cos(), theta.sin(), &mut w);
            plm_dtheta(l_max, &p, &w, theta.cos(), &mut d);
            let hi = plm_vec(l_max, theta + h);
            let lo = plm_vec(l_max, theta - h);
            for l in 0..=l_max {
                for m in 0..=l {
                    let fd = (hi[tri(l, m)] - lo[tri(l, m)]) / (2.0 * h);
                    assert!(
                        (d[tri(l, m)] - fd).abs() < 1e-6,
                        "dtheta mismatch at l={l} m={m}: {} vs {}",
                        d[tri(l, m)],
                        fd
                    );
                }
            }
        }
    }

    #[test]
    fn stable_at_high_degree() {
        // Values stay finite and bounded by the uniform norm law at l = 100.
        let p = plm_vec(100, 1.234);
        for l in 0..=100usize {
            let bound = ((2 * l + 1) as f64 / (4.0 * PI)).sqrt();
            for m in 0..=l {
                let v = p[tri(l, m)];
                assert!(v.is_finite());
                assert!(v.abs() <= bound * 1.0000001, "l={l} m={m}: {v} vs {bound}");
            }
        }
    }
}
