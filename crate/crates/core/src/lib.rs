//! Robin-Laplacian spectra of balls and planar star-shaped domains with
//! negative boundary parameter, explicit constants of the quantitative
//! second-eigenvalue inequality, and finite-element tools to check it and
//! the sharpness of its asymmetry exponent numerically.

pub mod ball_spectrum;
pub mod experiments;
pub mod fem;
pub mod geometry;
pub mod par;
pub mod quadrature;
pub mod special_fns;
pub mod stability_constants;

pub use ball_spectrum::{BallSpec, RadialEigenSolution, RobinParameter};
pub use experiments::{SharpnessTable, StabilityReport};
pub use fem::{DiscreteOperator, SpectrumResult};
pub use geometry::{StarDomain2D, TriMesh};
pub use stability_constants::{AsymmetryBudget, StabilityConstants};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    Bracketing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("boundary parameter {alpha} outside the admissible range {range}")]
    OutOfRange { alpha: f64, range: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("forbidden mode: {0}")]
    ModeViolation(String),
    #[error("domain is not star-shaped: min of 1 + eps*psi is {min}")]
    StarShape { min: f64 },
    #[error("degenerate mesh: {0}")]
    DegenerateElement(String),
    #[error("assembly failed: {0}")]
    Assembly(String),
    #[error("eigensolver did not converge: {reason} (best residual {best_residual:e})")]
    Solver { reason: String, best_residual: f64 },
    #[error("ambiguous eigenvalue cluster: {0}")]
    Cluster(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
