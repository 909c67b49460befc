//! Explicit Sobolev and Poincare constants for the oscillation chain.
//!
//! The `H^2 -> C^0` embedding constant is controlled by the series
//! `sum (2l+1)^2 / (1 + l(l+1) + l^2(l+1)^2)`, summed to a truncation point
//! with an analytic tail bound; the whole thing stays below `pi^2/3 + 2`.
//! The Poincare-type constant for mean-zero functions is `sqrt(7)/2`, with
//! the per-degree ratio `(1 + lam + lam^2)/lam^2` achieved at degree one.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sqrt(7)/2`, bounding `||u_0||_{H^2} / ||lap u_0||_{L^2}`.
pub const CP_UPPER: f64 = 1.322_875_655_532_295_3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub truncation: usize,
    pub cs_partial: f64,
    pub cs_tail_bound: f64,
    /// Valid upper bound for the embedding constant:
    /// `sqrt((partial + tail) / (4 pi))`.
    pub cs_upper: f64,
    pub cp_upper: f64,
    /// `2 * cs_upper * cp_upper`, the factor closing the oscillation chain.
    pub chain_factor: f64,
}

/// One series term.
pub fn cs_term(l: usize) -> f64 {
    let lam = (l * (l + 1)) as f64;
    let num = (2 * l + 1) as f64;
    num * num / (1.0 + lam + lam * lam)
}

/// Partial sum through degree `l_trunc`.
pub fn cs_partial(l_trunc: usize) -> f64 {
    (0..=l_trunc).map(cs_term).sum()
}

/// Analytic tail bound past `l_trunc >= 1`: each term is below
/// `1/l^2 + 2/(l(l+1)) + 1/(l+1)^2`, whose tails telescope or compare to
/// `1/(l(l-1))`.
pub fn cs_tail_bound(l_trunc: usize) -> f64 {
    assert!(l_trunc >= 1);
    let l = l_trunc as f64;
    1.0 / l + 3.0 / (l + 1.0)
}

/// Assemble the constants at a truncation point.
pub fn constants_report(l_trunc: usize) -> ConstantsReport {
    let partial = cs_partial(l_trunc);
    let tail = cs_tail_bound(l_trunc.max(1));
    let cs_upper = ((partial + tail) / (4.0 * PI)).sqrt();
    ConstantsReport {
        truncation: l_trunc,
        cs_partial: partial,
        cs_tail_bound: tail,
        cs_upper,
        cp_upper: CP_UPPER,
        chain_factor: 2.0 * cs_upper * CP_UPPER,
    }
}

/// Per-degree `H^2`-to-Laplacian ratio `(1 + lam + lam^2) / lam^2` with
/// `lam = l(l+1)`; degree zero sits in the Laplacian kernel.
pub fn cp_ratio(l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::Domain(
            "degree zero lies in the Laplacian kernel; the ratio needs l >= 1".into(),
        ));
    }
    let lam = (l * (l + 1)) as f64;
    Ok((1.0 + lam + lam * lam) / (lam * lam))
}

/// Closed-form balance bound for an antipodally symmetric delta-pinched
/// metric:
/// `exp(-2 sqrt(7 (pi^2/3 + 2)) sqrt(e^{e/delta + 1} / delta^2 - 1))`.
pub fn beta_delta_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!(
            "pinching ratio must lie in (0, 1], got {delta}"
        )));
    }
    let outer = (7.0 * (PI * PI / 3.0 + 2.0)).sqrt();
    let inner = ((std::f64::consts::E / delta + 1.0).exp() / (delta * delta) - 1.0).sqrt();
    Ok((-2.0 * outer * inner).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        assert_eq!(cs_partial(0), 1.0);
        // l = 1 term: 9 / (1 + 2 + 4)
        assert!((cs_term(1) - 9.0 / 7.0).abs() < 1e-15);
        // frozen partial sum at truncation 10 (computed by forward and
        // backward summation at high precision)
        assert!((cs_partial(10) - 3.800_732_258_529_878).abs() < 1e-13);
    }

    #[test]
    fn partial_plus_tail_below_closed_bound() {
        let cap = PI * PI / 3.0 + 2.0;
        let mut prev = 0.0;
        for l in 1..=100 {
            let p = cs_partial(l);
            assert!(p > prev, "partial sums must increase");
            prev = p;
            assert!(
                p + cs_tail_bound(l) < cap,
                "bound violated at l = {l}: {} vs {cap}",
                p + cs_tail_bound(l)
            );
        }
    }

    #[test]
    fn tail_bound_is_a_true_tail_bound() {
        // partial(100) approximates the series well; check partial(L) + tail(L)
        // stays above it for small L.
        let near_total = cs_partial(400);
        for l in [1usize, 2, 5, 10, 50] {
            assert!(cs_partial(l) + cs_tail_bound(l) > near_total);
        }
    }

    #[test]
    fn cp_ratio_values() {
        assert!(cp_ratio(0).is_err());
        assert_eq!(cp_ratio(1).unwrap(), 1.75);
        assert!((cp_ratio(2).unwrap() - 43.0 / 36.0).abs() < 1e-15);
        // decreasing toward 1
        let mut prev = f64::INFINITY;
        for l in 1..=50 {
            let r = cp_ratio(l).unwrap();
            assert!(r < prev);
            assert!(r >= 1.0);
            if l >= 2 {
                assert!(r < 1.75);
            }
            prev = r;
        }
        assert!((CP_UPPER * CP_UPPER - 1.75).abs() < 1e-15);
    }

    #[test]
    fn beta_delta_values() {
        // frozen regression value at delta = 1, checked against a log-space
        // evaluation of the same expression
        let direct = beta_delta_bound(1.0).unwrap();
        assert!((direct - 3.096_046_011_084_897e-34).abs() < 1e-44);
        let log_route = {
            let outer = (7.0 * (PI * PI / 3.0 + 2.0)).sqrt();
            let inner = ((std::f64::consts::E + 1.0).exp() - 1.0).ln() / 2.0;
            (-2.0 * outer * inner.exp()).exp()
        };
        assert!((direct - log_route).abs() <= 1e-16 * direct.abs().max(log_route.abs()) * 1e4);

        // monotone increasing in delta
        assert!(beta_delta_bound(0.5).unwrap() < beta_delta_bound(0.9).unwrap());
        assert!(beta_delta_bound(0.9).unwrap() < beta_delta_bound(1.0).unwrap());
        assert!(beta_delta_bound(0.0).is_err());
        assert!(beta_delta_bound(1.5).is_err());
    }

    #[test]
    fn constants_report_consistency() {
        let r = constants_report(100);
        assert!(r.cs_partial + r.cs_tail_bound < PI * PI / 3.0 + 2.0);
        assert!(r.cs_upper < 0.5 * ((PI * PI / 3.0 + 2.0) / PI).sqrt());
        assert!((r.chain_factor - 2.0 * r.cs_upper * r.cp_upper).abs() < 1e-15);
    }
}
