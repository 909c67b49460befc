//! Geodesic flow integration and closed-geodesic search.

pub mod dynamics;
pub mod rk;
pub mod sections;
pub mod systole;

pub use dynamics::{flow, Dynamics, GeodesicState, Trajectory};
pub use sections::{ellipse_perimeter, ellipse_perimeter_adaptive, principal_section_lengths};
pub use systole::{
    find_systole_upper, reintegrate_residual, ClosedGeodesic, SystoleConfig, SystoleEstimate,
    SystoleSource,
};
