//! Certified upper bounds on the systole by multistart shooting.
//!
//! Initial states are sampled quasi-randomly over the unit cosphere bundle;
//! each trajectory is scanned for near-returns inside the period window
//! `(0, 3 * 2 pi R]` (the circumradius bound guarantees a closed orbit in
//! that window), and near-returns are polished by Levenberg-Marquardt on the
//! full shooting map until the phase-space closure defect drops below
//! tolerance. Accepted lengths are true upper bounds up to that tolerance.
//! Principal sections (ellipsoids) and great circles (round metrics) are
//! always included as analytic candidates.

use nalgebra::{DMatrix, DVector, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::dynamics::{Dynamics, GeodesicState};
use crate::geodesics::rk::{integrate, State};
use crate::geodesics::sections::principal_section_lengths;
use crate::metrics::{balance, MetricModel};
use crate::sphere::SpherePoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystoleConfig {
    /// Number of quasi-random shooting starts.
    pub starts: usize,
    /// Acceptance threshold on the phase-space closure defect.
    pub closure_tol: f64,
    pub integrator_tol: f64,
    /// Period window as a multiple of `2 pi R`.
    pub period_factor: f64,
    /// Offset into the low-discrepancy sequence; fixed seed, fixed output.
    pub seed: u64,
    /// Trajectory samples per start when scanning for near-returns.
    pub sample_count: usize,
    pub max_candidates_per_start: usize,
}

impl Default for SystoleConfig {
    fn default() -> Self {
        SystoleConfig {
            starts: 512,
            closure_tol: 1e-9,
            integrator_tol: 1e-10,
            period_factor: 3.0,
            seed: 0,
            sample_count: 400,
            max_candidates_per_start: 3,
        }
    }
}

/// A numerically closed geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedGeodesic {
    pub initial_state: GeodesicState,
    pub length: f64,
    /// Phase-space distance between start and end at unit velocity scale.
    pub closure_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystoleSource {
    PrincipalSection,
    ShootingSearch,
}

/// An upper bound for the systole together with its certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystoleEstimate {
    pub value: f64,
    /// Always `"upper_bound"`: the search can only exhibit closed geodesics.
    pub kind: String,
    pub source: SystoleSource,
    pub candidates: Vec<ClosedGeodesic>,
}

/// Multistart upper bound for the length of the shortest closed geodesic.
pub fn find_systole_upper(metric: &MetricModel, cfg: &SystoleConfig) -> Result<SystoleEstimate> {
    let bal = balance(metric);
    let t_max = cfg.period_factor * 2.0 * std::f64::consts::PI * bal.circumradius;
    let min_length = 0.25 * 2.0 * std::f64::consts::PI * bal.inradius;
    let dyn_ = Dynamics::new(metric);

    let mut analytic: Vec<(ClosedGeodesic, SystoleSource)> = Vec::new();
    match metric {
        MetricModel::Round { radius } => {
            let q = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
            let v = Vector3::new(0.0, 1.0 / radius, 0.0);
            analytic.push((
                ClosedGeodesic {
                    initial_state: GeodesicState {
                        position: q,
                        velocity: v,
                    },
                    length: 2.0 * std::f64::consts::PI * radius,
                    closure_residual: 0.0,
                },
                SystoleSource::PrincipalSection,
            ));
        }
        MetricModel::Ellipsoid { axes } => {
            let lengths = principal_section_lengths(metric)?;
            let [a, b, c] = *axes;
            let ex = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
            let ey = SpherePoint::new(0.0, 1.0, 0.0).unwrap();
            let starts = [
                (ex, Vector3::new(0.0, 1.0 / b, 0.0)),
                (ex, Vector3::new(0.0, 0.0, 1.0 / c)),
                (ey, Vector3::new(0.0, 0.0, 1.0 / c)),
            ];
            let _ = a;
            for (i, (q, v)) in starts.into_iter().enumerate() {
                analytic.push((
                    ClosedGeodesic {
                        initial_state: GeodesicState {
                            position: q,
                            velocity: v,
                        },
                        length: lengths[i],
                        closure_residual: 0.0,
                    },
                    SystoleSource::PrincipalSection,
                ));
            }
        }
        MetricModel::Conformal { .. } => {}
    }

    let found: Vec<ClosedGeodesic> = (0..cfg.starts)
        .into_par_iter()
        .flat_map_iter(|i| shoot_one_start(&dyn_, metric, i as u64 + cfg.seed, t_max, cfg))
        .collect();

    let mut all: Vec<(ClosedGeodesic, SystoleSource)> = analytic;
    all.extend(
        found
            .into_iter()
            .map(|c| (c, SystoleSource::ShootingSearch)),
    );
    all.retain(|(c, _)| c.length >= min_length && c.length.is_finite());
    if all.is_empty() {
        return Err(Error::SearchFailure { starts: cfg.starts });
    }
    all.sort_by(|a, b| {
        (a.0.length, a.0.closure_residual)
            .partial_cmp(&(b.0.length, b.0.closure_residual))
            .unwrap()
    });

    // collapse length-duplicates (phases of the same orbit, orbit families)
    let mut dedup: Vec<(ClosedGeodesic, SystoleSource)> = Vec::new();
    for (c, s) in all {
        match dedup.last() {
            Some((prev, _)) if (c.length - prev.length).abs() < 1e-6 * (1.0 + prev.length) => {}
            _ => dedup.push((c, s)),
        }
    }
    dedup.truncate(32);

    let source = dedup[0].1;
    let value = dedup[0].0.length;
    Ok(SystoleEstimate {
        value,
        kind: "upper_bound".into(),
        source,
        candidates: dedup.into_iter().map(|(c, _)| c).collect(),
    })
}

/// Scan one quasi-random start for near-returns and polish them.
fn shoot_one_start(
    dyn_: &Dynamics,
    metric: &MetricModel,
    index: u64,
    t_max: f64,
    cfg: &SystoleConfig,
) -> Vec<ClosedGeodesic> {
    let u1 = halton(index + 1, 2);
    let u2 = halton(index + 1, 3);
    let u3 = halton(index + 1, 5);
    let z = 2.0 * u1 - 1.0;
    let phi = 2.0 * std::f64::consts::PI * u2;
    let alpha = 2.0 * std::f64::consts::PI * u3;
    let q = SpherePoint::new(
        (1.0 - z * z).max(0.0).sqrt() * phi.cos(),
        (1.0 - z * z).max(0.0).sqrt() * phi.sin(),
        z,
    )
    .unwrap();
    let (e1, e2) = q.tangent_frame();
    let dir = alpha.cos() * e1 + alpha.sin() * e2;
    let Ok(state) = GeodesicState::unit_speed(metric, q, dir) else {
        return Vec::new();
    };
    let y0 = dyn_.project(&dyn_.to_native(&state));

    // sample the defect along the trajectory
    let n = cfg.sample_count.max(16);
    let dt = t_max / n as f64;
    let mut defects = Vec::with_capacity(n + 1);
    let mut y = y0;
    defects.push(0.0);
    for _ in 1..=n {
        match integrate(|s| dyn_.rhs(s), y, dt, cfg.integrator_tol, |_, _| {}) {
            Ok(next) => {
                y = next;
                defects.push(dyn_.closure_defect(&y, &y0));
            }
            Err(_) => return Vec::new(),
        }
    }

    // interior local minima below a loose gate, best first
    let mut seeds: Vec<(f64, f64)> = Vec::new(); // (defect, t)
    for k in 2..n {
        if defects[k] < defects[k - 1] && defects[k] <= defects[k + 1] && defects[k] < 0.5 {
            seeds.push((defects[k], k as f64 * dt));
        }
    }
    seeds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    seeds.truncate(cfg.max_candidates_per_start);

    let mut out = Vec::new();
    for (_, t_seed) in seeds {
        if let Some(c) = polish(dyn_, y0, t_seed, cfg) {
            out.push(c);
        }
    }
    out
}

/// Levenberg-Marquardt on the shooting map `G(s, T) = flow_T(s) - s`.
fn polish(dyn_: &Dynamics, y_init: State, t_init: f64, cfg: &SystoleConfig) -> Option<ClosedGeodesic> {
    let tol = cfg.integrator_tol.min(1e-11);
    let flow_to = |y: &State, t: f64| -> Option<State> {
        integrate(|s| dyn_.rhs(s), *y, t, tol, |_, _| {}).ok()
    };
    let mut y = dyn_.project(&y_init);
    let mut t = t_init;
    let mut lambda = 1e-3;
    let mut end = flow_to(&y, t)?;
    let mut defect = dyn_.closure_defect(&end, &y);
    for _ in 0..30 {
        if defect < cfg.closure_tol {
            let state = dyn_.from_native(&y);
            return Some(ClosedGeodesic {
                initial_state: state,
                length: t,
                closure_residual: defect,
            });
        }
        // Jacobian of G by forward differences in the six state slots; the
        // period column is the flow derivative at the endpoint.
        let g = DVector::from_iterator(6, (end - y).iter().copied());
        let mut jac = DMatrix::zeros(6, 7);
        let h = 1e-7;
        for col in 0..6 {
            let mut yp = y;
            yp[col] += h;
            let endp = flow_to(&yp, t)?;
            for row in 0..6 {
                jac[(row, col)] = ((endp[row] - yp[row]) - (end[row] - y[row])) / h;
            }
        }
        let dend = dyn_.rhs(&end);
        for row in 0..6 {
            jac[(row, 6)] = dend[row];
        }

        let jt = jac.transpose();
        let a = &jt * &jac;
        let gvec = &jt * &g;
        let mut improved = false;
        for _ in 0..8 {
            let mut damped = a.clone();
            for i in 0..7 {
                damped[(i, i)] += lambda * (a[(i, i)].abs() + 1e-12);
            }
            let Some(delta) = damped.lu().solve(&(-&gvec)) else {
                lambda *= 10.0;
                continue;
            };
            let mut y_new = y;
            for i in 0..6 {
                y_new[i] += delta[i];
            }
            y_new = dyn_.project(&y_new);
            let t_new = t + delta[6];
            if !(t_new > 0.05 && t_new < 4.0 * t_init.max(1.0) + 10.0) {
                lambda *= 10.0;
                continue;
            }
            let Some(end_new) = flow_to(&y_new, t_new) else {
                lambda *= 10.0;
                continue;
            };
            let d_new = dyn_.closure_defect(&end_new, &y_new);
            if d_new < defect {
                y = y_new;
                t = t_new;
                end = end_new;
                defect = d_new;
                lambda = (lambda * 0.4).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    if defect < cfg.closure_tol {
        let state = dyn_.from_native(&y);
        Some(ClosedGeodesic {
            initial_state: state,
            length: t,
            closure_residual: defect,
        })
    } else {
        None
    }
}

/// Re-integrate a candidate at a tighter tolerance and report the defect.
pub fn reintegrate_residual(metric: &MetricModel, cand: &ClosedGeodesic, tol: f64) -> Result<f64> {
    let dyn_ = Dynamics::new(metric);
    let y0 = dyn_.to_native(&cand.initial_state);
    let end = integrate(|s| dyn_.rhs(s), y0, cand.length, tol, |_, _| {})?;
    Ok(dyn_.closure_defect(&end, &y0))
}

/// Van der Corput radical inverse in the given base.
fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::HarmonicField;
    use std::f64::consts::PI;

    fn quick_cfg(starts: usize) -> SystoleConfig {
        SystoleConfig {
            starts,
            sample_count: 200,
            ..SystoleConfig::default()
        }
    }

    #[test]
    fn round_systole() {
        let metric = MetricModel::round(1.0).unwrap();
        let est = find_systole_upper(&metric, &quick_cfg(24)).unwrap();
        assert!((est.value - 2.0 * PI).abs() < 1e-6, "systole {}", est.value);
        assert_eq!(est.kind, "upper_bound");
    }

    #[test]
    fn prolate_equator_beats_meridians() {
        let metric = MetricModel::ellipsoid(1.0, 1.0, 2.0).unwrap();
        let est = find_systole_upper(&metric, &quick_cfg(48)).unwrap();
        assert!((est.value - 2.0 * PI).abs() < 1e-6, "systole {}", est.value);
        // meridian family should appear among the longer candidates
        let p12 = crate::geodesics::ellipse_perimeter(1.0, 2.0);
        assert!(est
            .candidates
            .iter()
            .any(|c| (c.length - p12).abs() < 1e-5));
    }

    #[test]
    fn conformal_upper_bound_against_circumradius() {
        let mut phi = HarmonicField::zeros(4);
        phi.set(2, 0, 0.08);
        phi.set(4, 3, -0.05);
        let metric = MetricModel::conformal(phi.clone());
        let est = find_systole_upper(&metric, &quick_cfg(64)).unwrap();
        let max_phi = crate::sphere::field_extrema(&phi).1.value;
        assert!(
            est.value <= 2.0 * PI * max_phi.exp() + 1e-6,
            "systole {} vs 2 pi e^max {}",
            est.value,
            2.0 * PI * max_phi.exp()
        );
        for c in &est.candidates {
            assert!(c.closure_residual < 1e-9);
        }
    }

    #[test]
    fn accepted_candidates_survive_reintegration() {
        let metric = MetricModel::ellipsoid(1.0, 1.2, 1.5).unwrap();
        let cfg = quick_cfg(32);
        let est = find_systole_upper(&metric, &cfg).unwrap();
        for c in est.candidates.iter().take(4) {
            if c.closure_residual == 0.0 {
                continue; // analytic candidate
            }
            let r = reintegrate_residual(&metric, c, 1e-13).unwrap();
            assert!(
                r < 10.0 * cfg.closure_tol,
                "reintegrated residual {r} for length {}",
                c.length
            );
        }
    }

    #[test]
    fn halton_is_low_discrepancy_ish() {
        let vals: Vec<f64> = (1..=16).map(|i| halton(i, 2)).collect();
        assert!((vals[0] - 0.5).abs() < 1e-15);
        assert!((vals[1] - 0.25).abs() < 1e-15);
        assert!((vals[2] - 0.75).abs() < 1e-15);
        for v in vals {
            assert!((0.0..1.0).contains(&v));
        }
    }
}
