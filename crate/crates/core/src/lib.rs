//! Numerical systolic geometry on the 2-sphere.
//!
//! The crate computes the quantities that enter systolic inequalities for
//! Riemannian metrics on `S^2` - capacity values of model domains, fiberwise
//! balance of unit cosphere bundles, curvature pinching, area, diameter,
//! first Laplace eigenvalue, and certified upper bounds on the systole - and
//! verifies the full chain of inequalities relating them, with explicit
//! margins. A spectral Newton solver for the prescribed Gauss curvature
//! equation connects pinching to balance through explicit Sobolev and
//! Poincare constants.

pub mod capacities;
pub mod error;
pub mod geodesics;
pub mod metrics;
pub mod nirenberg;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
