//! Pseudospectra `sigma_eps(A) = { z : sigma_min(A - zI) < eps }` on a grid,
//! their connected components, and certified polygonal paths from a point
//! of `sigma_eps(A)` to an eigenvalue.

mod grid;
mod path;

pub use grid::{complement_components, components, grid_sigma_min, ComponentLabeling, GridBounds, GridMetadata, PseudoGrid};
pub use path::{certify_path, find_path, PathCertificate, PathOptions, PathReport, PolyPath};
