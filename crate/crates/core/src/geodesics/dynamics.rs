//! Geodesic flows as first-order systems in ambient coordinates.
//!
//! Conformal metrics flow on the unit sphere itself:
//!
//! ```text
//! p'' = -|p'|^2 p + |p'|^2 grad(phi) - 2 (grad(phi) . p') p'
//! ```
//!
//! with the tangential gradient of the conformal factor; at unit metric
//! speed `e^{2 phi} |p'|^2 = 1` the arc length equals elapsed time.
//! Ellipsoid metrics flow on the embedded surface with the normal-projection
//! acceleration `r'' = -(r'^T H r' / |grad F|^2) grad F`; the axis-scaling
//! map carries states between the parameter sphere and the surface.

use nalgebra::{Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geodesics::rk::{integrate, State};
use crate::metrics::MetricModel;
use crate::sphere::{HarmonicField, SpherePoint};

/// A point of the unit cosphere bundle: position on the parameter sphere
/// and an ambient tangent vector of unit metric speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub position: SpherePoint,
    pub velocity: Vector3<f64>,
}

impl GeodesicState {
    /// Build from a position and direction, rescaling to unit metric speed.
    pub fn unit_speed(
        metric: &MetricModel,
        position: SpherePoint,
        direction: Vector3<f64>,
    ) -> Result<Self> {
        let p = position.coords();
        let tangential = direction - direction.dot(&p) * p;
        if tangential.norm() < 1e-13 {
            return Err(crate::error::Error::Domain(
                "direction collapses onto the normal".into(),
            ));
        }
        let speed = metric.speed(&position, &tangential);
        Ok(GeodesicState {
            position,
            velocity: tangential / speed,
        })
    }
}

/// The flow in its native ambient space.
pub struct Dynamics<'a> {
    metric: &'a MetricModel,
    phi: Option<&'a HarmonicField>,
    axes: Option<[f64; 3]>,
}

impl<'a> Dynamics<'a> {
    pub fn new(metric: &'a MetricModel) -> Self {
        match metric {
            MetricModel::Conformal { phi } => Dynamics {
                metric,
                phi: Some(phi),
                axes: None,
            },
            MetricModel::Ellipsoid { axes } => Dynamics {
                metric,
                phi: None,
                axes: Some(*axes),
            },
            MetricModel::Round { .. } => Dynamics {
                metric,
                phi: None,
                axes: None,
            },
        }
    }

    pub fn metric(&self) -> &MetricModel {
        self.metric
    }

    /// Right-hand side of the first-order system `(pos, vel)`.
    pub fn rhs(&self, y: &State) -> State {
        let p = Vector3::new(y[0], y[1], y[2]);
        let v = Vector3::new(y[3], y[4], y[5]);
        let acc = match self.axes {
            Some(axes) => {
                // r'' = -(r'^T H r' / |grad F|^2) grad F, F = sum r_i^2 / a_i^2
                let inv2 = Vector3::new(
                    1.0 / (axes[0] * axes[0]),
                    1.0 / (axes[1] * axes[1]),
                    1.0 / (axes[2] * axes[2]),
                );
                let grad_f = 2.0 * p.component_mul(&inv2);
                let hvv = 2.0 * v.component_mul(&inv2).dot(&v);
                -(hvv / grad_f.norm_squared()) * grad_f
            }
            None => {
                let v2 = v.norm_squared();
                match self.phi {
                    None => -v2 * p,
                    Some(phi) => {
                        let point = SpherePoint::from_unit(p);
                        let (_, grad) = phi.eval_with_gradient(&point);
                        -v2 * p + v2 * grad - 2.0 * grad.dot(&v) * v
                    }
                }
            }
        };
        Vector6::new(v.x, v.y, v.z, acc.x, acc.y, acc.z)
    }

    /// Native state from a public unit-speed state on the parameter sphere.
    pub fn to_native(&self, s: &GeodesicState) -> State {
        match self.axes {
            Some(axes) => {
                let d = Vector3::new(axes[0], axes[1], axes[2]);
                let r = s.position.coords().component_mul(&d);
                let rv = s.velocity.component_mul(&d);
                Vector6::new(r.x, r.y, r.z, rv.x, rv.y, rv.z)
            }
            None => {
                let p = s.position.coords();
                let v = s.velocity;
                Vector6::new(p.x, p.y, p.z, v.x, v.y, v.z)
            }
        }
    }

    /// Public state on the parameter sphere from a native state.
    pub fn from_native(&self, y: &State) -> GeodesicState {
        let p = Vector3::new(y[0], y[1], y[2]);
        let v = Vector3::new(y[3], y[4], y[5]);
        match self.axes {
            Some(axes) => {
                let dinv = Vector3::new(1.0 / axes[0], 1.0 / axes[1], 1.0 / axes[2]);
                GeodesicState {
                    position: SpherePoint::from_unit(p.component_mul(&dinv)),
                    velocity: v.component_mul(&dinv),
                }
            }
            None => GeodesicState {
                position: SpherePoint::from_unit(p),
                velocity: v,
            },
        }
    }

    /// Project a native state onto the constraint manifold: position on the
    /// surface, tangential velocity, unit metric speed.
    pub fn project(&self, y: &State) -> State {
        let p = Vector3::new(y[0], y[1], y[2]);
        let v = Vector3::new(y[3], y[4], y[5]);
        match self.axes {
            Some(axes) => {
                let inv2 = Vector3::new(
                    1.0 / (axes[0] * axes[0]),
                    1.0 / (axes[1] * axes[1]),
                    1.0 / (axes[2] * axes[2]),
                );
                let f = p.component_mul(&inv2).dot(&p);
                let r = p / f.sqrt();
                let n = 2.0 * r.component_mul(&inv2);
                let nn = n.normalize();
                let vt = v - v.dot(&nn) * nn;
                let rv = vt / vt.norm();
                Vector6::new(r.x, r.y, r.z, rv.x, rv.y, rv.z)
            }
            None => {
                let pp = p.normalize();
                let vt = v - v.dot(&pp) * pp;
                let point = SpherePoint::from_unit(pp);
                let target = 1.0 / self.metric.speed(&point, &vt.normalize());
                let vv = vt.normalize() * target;
                Vector6::new(pp.x, pp.y, pp.z, vv.x, vv.y, vv.z)
            }
        }
    }

    /// Metric speed `sqrt(g(v, v))` of a native state; 1 along exact flows.
    pub fn energy(&self, y: &State) -> f64 {
        let v = Vector3::new(y[3], y[4], y[5]);
        match self.axes {
            Some(_) => v.norm(),
            None => {
                let p = SpherePoint::from_unit(Vector3::new(y[0], y[1], y[2]));
                self.metric.speed(&p, &v)
            }
        }
    }

    /// Phase-space closure defect with the velocity normalized to unit
    /// ambient length, making the defect scale-free.
    pub fn closure_defect(&self, a: &State, b: &State) -> f64 {
        let pa = Vector3::new(a[0], a[1], a[2]);
        let pb = Vector3::new(b[0], b[1], b[2]);
        let va = Vector3::new(a[3], a[4], a[5]).normalize();
        let vb = Vector3::new(b[3], b[4], b[5]).normalize();
        ((pa - pb).norm_squared() + (va - vb).norm_squared()).sqrt()
    }
}

/// A sampled flow trajectory in public (parameter-sphere) coordinates.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GeodesicState>,
    /// Largest `|g(v,v)^(1/2) - 1|` seen at the samples.
    pub energy_drift: f64,
    pub final_state: GeodesicState,
}

/// Integrate the geodesic flow for `time`, sampling `n_samples` states.
pub fn flow(
    metric: &MetricModel,
    start: &GeodesicState,
    time: f64,
    tol: f64,
    n_samples: usize,
) -> Result<Trajectory> {
    let dyn_ = Dynamics::new(metric);
    let y0 = dyn_.to_native(start);
    let mut times = Vec::with_capacity(n_samples + 1);
    let mut states = Vec::with_capacity(n_samples + 1);
    let mut drift: f64 = 0.0;
    times.push(0.0);
    states.push(*start);
    let mut y = y0;
    let n = n_samples.max(1);
    for k in 1..=n {
        let t_target = time * k as f64 / n as f64;
        let t_prev = time * (k - 1) as f64 / n as f64;
        y = integrate(|s| dyn_.rhs(s), y, t_target - t_prev, tol, |_, _| {})?;
        drift = drift.max((dyn_.energy(&y) - 1.0).abs());
        times.push(t_target);
        states.push(dyn_.from_native(&y));
    }
    Ok(Trajectory {
        times,
        states,
        energy_drift: drift,
        final_state: dyn_.from_native(&y),
    })
}
