//! Closed-form capacity values of the four-dimensional ball and the round
//! disk cotangent bundle, and the interval pinning `c_1` of a star-shaped
//! hypersurface between its inradius and circumradius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::FiberBalance;

/// Which model domain a capacity value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainTag {
    Ball,
    RoundDiskBundle,
}

/// The lattice datum certifying a capacity value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    /// The ball degree `d` with `d^2 + d <= 2k <= d^2 + 3d`.
    BallDegree { d: u64 },
    /// A minimizing pair for `min 2 pi (m + n)` s.t. `(m+1)(n+1) >= k+1`.
    DiskPair { m: u64, n: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityValue {
    pub k: u64,
    pub value: f64,
    pub domain_tag: DomainTag,
    pub witness: Witness,
}

/// `c_k` of the ball of capacity `a`: `d * a` for the unique `d >= 0` with
/// `d^2 + d <= 2k <= d^2 + 3d`.
pub fn ck_ball(k: u64, a: f64) -> CapacityValue {
    assert!(a > 0.0, "ball capacity must be positive");
    let mut d = 0u64;
    loop {
        let lo = d * d + d;
        let hi = d * d + 3 * d;
        if lo <= 2 * k && 2 * k <= hi {
            return CapacityValue {
                k,
                value: d as f64 * a,
                domain_tag: DomainTag::Ball,
                witness: Witness::BallDegree { d },
            };
        }
        d += 1;
    }
}

/// `c_k` of the unit-disk cotangent bundle of the round sphere, scaled by
/// `R`: `R * min { 2 pi (m + n) : (m+1)(n+1) >= k+1 }` over nonnegative
/// integers (zero included, so that `c_1 = 2 pi R` via `(1, 0)`).
///
/// For each `m <= k` the minimal partner is `n = ceil((k+1)/(m+1)) - 1`,
/// and `m = k` always qualifies, so the scan is complete.
pub fn ck_round_disk(k: u64, radius: f64) -> CapacityValue {
    assert!(radius > 0.0, "disk bundle radius must be positive");
    let mut best: Option<(u64, u64, u64)> = None; // (m + n, m, n)
    for m in 0..=k {
        let n = (k + 1).div_ceil(m + 1) - 1;
        let total = m + n;
        let better = match best {
            None => true,
            Some((t, bm, _)) => total < t || (total == t && m < bm),
        };
        if better {
            best = Some((total, m, n));
        }
    }
    let (total, m, n) = best.expect("m = k always admissible");
    CapacityValue {
        k,
        value: radius * 2.0 * std::f64::consts::PI * total as f64,
        domain_tag: DomainTag::RoundDiskBundle,
        witness: Witness::DiskPair { m, n },
    }
}

/// The interval `[2 pi r, 2 pi R]` bracketing `c_1` of the domain enclosed
/// by a fiberwise star-shaped hypersurface with the given balance data.
pub fn c1_interval(balance: &FiberBalance) -> Result<(f64, f64)> {
    if !(balance.inradius > 0.0) || !(balance.circumradius >= balance.inradius) {
        return Err(Error::Domain(format!(
            "need 0 < inradius <= circumradius, got ({}, {})",
            balance.inradius, balance.circumradius
        )));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok((two_pi * balance.inradius, two_pi * balance.circumradius))
}
