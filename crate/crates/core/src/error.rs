use thiserror::Error;

/// Errors surfaced by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too coarse for band limit {band_limit}: need n_theta >= {need_theta} and n_phi >= {need_phi}, got {got_theta} x {got_phi}")]
    Resolution {
        band_limit: usize,
        need_theta: usize,
        need_phi: usize,
        got_theta: usize,
        got_phi: usize,
    },

    #[error("Green's function evaluated on (nearly) coincident points, |p - q| = {dist:.3e}")]
    GreenSingularity { dist: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("solver did not converge after {iterations} iterations, last residual {residual:.3e}")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("geodesic integrator step size underflow at t = {t:.6} (step {step:.3e})")]
    Stiffness { t: f64, step: f64 },

    #[error("closed-geodesic search exhausted its budget of {starts} starts without an accepted candidate")]
    SearchFailure { starts: usize },

    #[error("operation unsupported for this metric variant: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
