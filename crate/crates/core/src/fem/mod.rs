//! Finite elements for `-Δu = λu` in `Omega`, `∂u/∂ν + αu = 0` on the boundary.

mod assembly;
mod eigen;
mod sparse;
mod symmetry;

pub use assembly::{assemble, DiscreteOperator, DofReflections, ElementOrder};
pub use eigen::{residual, solve_lowest, SpectrumResult, DENSE_LIMIT};
pub use sparse::CsrMatrix;
pub use symmetry::{antisymmetry_defect, lambda2_cluster, Axis, CLUSTER_GAP};
