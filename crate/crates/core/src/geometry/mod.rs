//! Planar star-shaped domains `r < R (1 + eps psi(theta))`, their Fraenkel
//! asymmetry and triangulations.

mod asymmetry;
mod domain;
mod mesh;

pub use asymmetry::{fraenkel_asymmetry, symmetric_difference_area, AsymmetryResult};
pub use domain::{make_star_domain, ModeMap, StarDomain2D};
pub use mesh::{triangulate, Reflections, TriMesh, MIN_ANGLE_DEG};
