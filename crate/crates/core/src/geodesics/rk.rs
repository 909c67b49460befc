//! Adaptive Dormand-Prince 5(4) integration for the 6-dimensional
//! phase-space flows used by the geodesic machinery.

use nalgebra::SVector;

use crate::error::{Error, Result};

pub type State = SVector<f64, 6>;

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;
const MIN_STEP: f64 = 1e-14;

/// One adaptive integration over `[0, t_end]`; `t_end` may be negative.
///
/// Calls `on_step(t, y)` after every accepted step (including the final
/// clamped one).
pub fn integrate<F, C>(rhs: F, y0: State, t_end: f64, tol: f64, mut on_step: C) -> Result<State>
where
    F: Fn(&State) -> State,
    C: FnMut(f64, &State),
{
    if t_end == 0.0 {
        return Ok(y0);
    }
    let dir = t_end.signum();
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = rhs(&y);
    let mut h = dir * (0.01 * t_end.abs()).min(0.1).max(1e-6);
    let mut steps = 0usize;
    loop {
        if (t_end - t) * dir <= 0.0 {
            return Ok(y);
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        let (y_new, err, k_last) = dp5_step(&rhs, &y, &k1, h, tol);
        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = k_last; // FSAL
            on_step(t, &y);
            let scale = if err == 0.0 {
                MAX_SCALE
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE)
            };
            h *= scale;
            if (t - t_end) * dir >= 0.0 {
                return Ok(y);
            }
        } else {
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, 1.0);
        }
        if h.abs() < MIN_STEP {
            return Err(Error::Stiffness { t, step: h });
        }
        steps += 1;
        if steps > 40_000_000 {
            return Err(Error::Stiffness { t, step: h });
        }
    }
}

/// Single Dormand-Prince step; returns `(y5, scaled_error, k7)`.
fn dp5_step<F>(rhs: &F, y: &State, k1: &State, h: f64, tol: f64) -> (State, f64, State)
where
    F: Fn(&State) -> State,
{
    let k2 = rhs(&(y + h * (A21 * k1)));
    let k3 = rhs(&(y + h * (A31 * k1 + A32 * k2)));
    let k4 = rhs(&(y + h * (A41 * k1 + A42 * k2 + A43 * k3)));
    let k5 = rhs(&(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4)));
    let k6 = rhs(&(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5)));
    let y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = rhs(&y5);
    let err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    let mut acc = 0.0;
    for i in 0..6 {
        let scale = tol + tol * y[i].abs().max(y5[i].abs());
        let e = err_vec[i] / scale;
        acc += e * e;
    }
    ((y5), (acc / 6.0).sqrt(), k7)
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
