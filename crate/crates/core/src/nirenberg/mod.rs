//! The prescribed Gauss curvature solver and its inequality chain: explicit
//! Sobolev/Poincare constants, the spectral Newton solver, per-lemma margin
//! checks, and the closed-form pinching-to-balance bound.

pub mod checks;
pub mod constants;
pub mod solver;

pub use checks::{
    check_gradient_bound, check_min_bound, check_onofri, oscillation, oscillation_chain,
    GradientBoundReport, OscillationChain,
};
pub use constants::{
    beta_delta_bound, constants_report, cp_ratio, cs_partial, cs_tail_bound, cs_term,
    ConstantsReport, CP_UPPER,
};
pub use solver::{
    manufactured_curvature, solve_gauss_equation, solver_grid, GaussSolution, PrescribedCurvature,
};
