//! Spherical grids, real spherical harmonics, the round Green's function,
//! and extremum location on the sphere.

pub mod basis;
pub mod extrema;
pub mod field;
pub mod green;
pub mod grid;
pub mod legendre;

pub use basis::{BasisTable, Parity};
pub use extrema::{
    extrema_on_grid, field_extrema, oscillation_field, oscillation_samples, refine_extremum,
    sup_norm_field, Extremum, Objective,
};
pub use field::HarmonicField;
pub use green::{
    cap_integral, cap_integral_nonconstant, green_function, integrate_green,
    integrate_green_nonconstant, integrate_green_weighted, GREEN_CONSTANT,
};
pub use grid::{gauss_legendre, SphereGrid, SpherePoint};
