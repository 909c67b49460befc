//! Locating extrema of smooth functions on the sphere.
//!
//! Extrema are seeded by a coarse grid scan and then polished by a short
//! tangent-plane Newton iteration (gradient-ascent fallback), capped at 50
//! steps with a 1e-8 position tolerance.

use nalgebra::{Matrix2, Vector2, Vector3};

use crate::sphere::field::HarmonicField;
use crate::sphere::grid::{SphereGrid, SpherePoint};

const MAX_REFINE_STEPS: usize = 50;
const POSITION_TOL: f64 = 1e-8;
const FD_GRAD_STEP: f64 = 1e-6;
const FD_HESS_STEP: f64 = 1e-4;

/// A located extremum.
#[derive(Debug, Clone, Copy)]
pub struct Extremum {
    pub point: SpherePoint,
    pub value: f64,
}

/// Objective with an optional analytic tangential gradient.
pub struct Objective<'a> {
    pub f: &'a dyn Fn(&SpherePoint) -> f64,
    pub grad: Option<&'a dyn Fn(&SpherePoint) -> Vector3<f64>>,
}

impl<'a> Objective<'a> {
    pub fn new(f: &'a dyn Fn(&SpherePoint) -> f64) -> Self {
        Objective { f, grad: None }
    }

    pub fn with_gradient(
        f: &'a dyn Fn(&SpherePoint) -> f64,
        grad: &'a dyn Fn(&SpherePoint) -> Vector3<f64>,
    ) -> Self {
        Objective { f, grad: Some(grad) }
    }

    fn gradient(&self, p: &SpherePoint) -> Vector3<f64> {
        match self.grad {
            Some(g) => {
                let v = g(p);
                // keep it tangential even if the caller was sloppy
                v - v.dot(&p.coords()) * p.coords()
            }
            None => {
                let (e1, e2) = p.tangent_frame();
                let mut g = Vector3::zeros();
                for dir in [e1, e2] {
                    let plus = SpherePoint::from_unit(p.coords() + FD_GRAD_STEP * dir);
                    let minus = SpherePoint::from_unit(p.coords() - FD_GRAD_STEP * dir);
                    let d = ((self.f)(&plus) - (self.f)(&minus)) / (2.0 * FD_GRAD_STEP);
                    g += d * dir;
                }
                g
            }
        }
    }
}

/// Polish one extremum from `start`; `sign = +1` maximizes, `-1` minimizes.
pub fn refine_extremum(obj: &Objective, start: SpherePoint, maximize: bool) -> Extremum {
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut p = start;
    let mut best = Extremum {
        point: p,
        value: (obj.f)(&p),
    };
    for _ in 0..MAX_REFINE_STEPS {
        let (e1, e2) = p.tangent_frame();
        let g3 = obj.gradient(&p);
        let g = Vector2::new(g3.dot(&e1), g3.dot(&e2)) * sign;
        if g.norm() < 1e-13 {
            break;
        }
        // FD Hessian of sign*f in the tangent chart.
        let h = FD_HESS_STEP;
        let gd = |dir: Vector3<f64>| -> Vector2<f64> {
            let q = SpherePoint::from_unit(p.coords() + h * dir);
            let gq = obj.gradient(&q);
            // expressing in the frame at p perturbs the Hessian at O(h),
            // tolerable for a safeguarded Newton step
            Vector2::new(gq.dot(&e1), gq.dot(&e2)) * sign
        };
        let gp1 = gd(e1);
        let gm1 = gd(-e1);
        let gp2 = gd(e2);
        let gm2 = gd(-e2);
        let hess = Matrix2::new(
            (gp1.x - gm1.x) / (2.0 * h),
            (gp2.x - gm2.x) / (2.0 * h),
            (gp1.y - gm1.y) / (2.0 * h),
            (gp2.y - gm2.y) / (2.0 * h),
        );
        let hess = 0.5 * (hess + hess.transpose());

        // Newton step when the curvature has the right sign, else ascent.
        let newton = hess.try_inverse().map(|hi| -(hi * g));
        let concave = hess.m11 < 0.0 && hess.determinant() > 0.0;
        let mut step = match newton {
            Some(d) if concave && d.norm() < 0.5 => d,
            _ => g.normalize() * 0.05_f64.min(g.norm()),
        };

        // Backtracking on the signed objective.
        let f0 = sign * (obj.f)(&p);
        let mut moved = false;
        for _ in 0..25 {
            let cand = SpherePoint::from_unit(p.coords() + step.x * e1 + step.y * e2);
            let val = (obj.f)(&cand);
            if sign * val > f0 {
                p = cand;
                if sign * (val - best.value) > 0.0 {
                    best = Extremum { point: cand, value: val };
                }
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved || step.norm() < POSITION_TOL {
            break;
        }
    }
    best
}

/// Grid scan plus refinement; returns the (min, max) extrema of `obj`.
pub fn extrema_on_grid(obj: &Objective, grid: &SphereGrid) -> (Extremum, Extremum) {
    let mut min = Extremum {
        point: grid.nodes()[0],
        value: f64::INFINITY,
    };
    let mut max = Extremum {
        point: grid.nodes()[0],
        value: f64::NEG_INFINITY,
    };
    for p in grid.nodes() {
        let v = (obj.f)(p);
        if v < min.value {
            min = Extremum { point: *p, value: v };
        }
        if v > max.value {
            max = Extremum { point: *p, value: v };
        }
    }
    let min = refine_extremum(obj, min.point, false);
    let max = refine_extremum(obj, max.point, true);
    (min, max)
}

/// max - min of raw samples; no refinement is possible from samples alone.
pub fn oscillation_samples(values: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Refined (min, max) of a band-limited field.
pub fn field_extrema(field: &HarmonicField) -> (Extremum, Extremum) {
    let n = (2 * field.band_limit() + 2).max(48);
    let grid = SphereGrid::new(n, n);
    let f = |p: &SpherePoint| field.eval(p);
    let g = |p: &SpherePoint| field.eval_with_gradient(p).1;
    let obj = Objective::with_gradient(&f, &g);
    extrema_on_grid(&obj, &grid)
}

/// `osc(f) = max f - min f` with refined extrema.
pub fn oscillation_field(field: &HarmonicField) -> f64 {
    let (min, max) = field_extrema(field);
    max.value - min.value
}

/// Refined sup norm of a band-limited field.
pub fn sup_norm_field(field: &HarmonicField) -> f64 {
    let (min, max) = field_extrema(field);
    max.value.abs().max(min.value.abs())
}
